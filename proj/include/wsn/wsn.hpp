#pragma once

// Library version, reported by the command-line tool.
#define WSN_VERSION "1.0.0"

#include "wsn/analysis.hpp"
#include "wsn/config.hpp"
#include "wsn/contention.hpp"
#include "wsn/core.hpp"
#include "wsn/experiments.hpp"
#include "wsn/flood.hpp"
#include "wsn/frame.hpp"
#include "wsn/mobility.hpp"
#include "wsn/radio.hpp"
#include "wsn/routing.hpp"
#include "wsn/scenario.hpp"
#include "wsn/stats.hpp"
#include "wsn/timeline.hpp"
