#pragma once

// Mobile sink trajectories.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "wsn/core.hpp"

namespace wsn {

enum class MobilityModel { Static, Bounce, EdgeLine, DiagonalLine };

inline const char* to_string(MobilityModel m) {
  switch (m) {
    case MobilityModel::Static: return "static";
    case MobilityModel::Bounce: return "bounce";
    case MobilityModel::EdgeLine: return "edge";
    case MobilityModel::DiagonalLine: return "diagonal";
  }
  return "?";
}

inline MobilityModel parse_mobility(const std::string& s) {
  if (s == "static") return MobilityModel::Static;
  if (s == "bounce") return MobilityModel::Bounce;
  if (s == "edge") return MobilityModel::EdgeLine;
  if (s == "diagonal") return MobilityModel::DiagonalLine;
  throw Error(ErrorCode::ConfigError, "unknown mobility model '" + s + "' (static, bounce, edge, diagonal)");
}

/// Sink position over time. One `step()` is one routing round; `step(dt)`
/// scales the advance for event-time use with speeds in m/s.
///
/// Bounce: each axis moves by an independent uniform draw in [0, speed]
/// along its current direction and reflects off the field borders.
/// Lines: constant velocity from `from` to `to`; the sink has left once it
/// reaches `to`.
class SinkTrack {
 public:
  static SinkTrack stationary(Position at) {
    SinkTrack t;
    t.model_ = MobilityModel::Static;
    t.pos_ = at;
    return t;
  }

  static SinkTrack bounce(double speed_max, double field, Position start, int dir_x, int dir_y,
                          std::uint64_t seed) {
    SinkTrack t;
    t.model_ = MobilityModel::Bounce;
    t.speed_ = speed_max;
    t.field_ = field;
    t.pos_ = start;
    t.dir_x_ = dir_x >= 0 ? 1 : -1;
    t.dir_y_ = dir_y >= 0 ? 1 : -1;
    t.rng_.seed(seed);
    return t;
  }

  static SinkTrack line(MobilityModel model, Position from, Position to, double speed) {
    SinkTrack t;
    t.model_ = model;
    t.speed_ = speed;
    t.from_ = from;
    t.to_ = to;
    t.pos_ = from;
    t.length_ = distance(from, to);
    return t;
  }

  /// Along the lower edge of a side x side network, corner to corner.
  static SinkTrack edge(double side, double speed) {
    return line(MobilityModel::EdgeLine, {0.0, 0.0}, {side, 0.0}, speed);
  }

  /// Lower-left to upper-right corner.
  static SinkTrack diagonal(double side, double speed) {
    return line(MobilityModel::DiagonalLine, {0.0, 0.0}, {side, side}, speed);
  }

  MobilityModel model() const { return model_; }
  const Position& position() const { return pos_; }
  double speed() const { return speed_; }
  double traveled() const { return traveled_; }
  double length() const { return length_; }

  bool departed() const {
    return (model_ == MobilityModel::EdgeLine || model_ == MobilityModel::DiagonalLine) &&
           speed_ > 0.0 && traveled_ >= length_;
  }

  void step(double scale = 1.0) {
    switch (model_) {
      case MobilityModel::Static:
        break;
      case MobilityModel::Bounce: {
        if (speed_ <= 0.0) break;
        std::uniform_real_distribution<double> u(0.0, speed_ * scale);
        pos_.x = reflect(pos_.x + dir_x_ * u(rng_), dir_x_);
        pos_.y = reflect(pos_.y + dir_y_ * u(rng_), dir_y_);
        break;
      }
      case MobilityModel::EdgeLine:
      case MobilityModel::DiagonalLine: {
        traveled_ += speed_ * scale;
        const double f = length_ > 0.0 ? std::min(traveled_ / length_, 1.0) : 1.0;
        pos_ = {from_.x + f * (to_.x - from_.x), from_.y + f * (to_.y - from_.y)};
        break;
      }
    }
  }

  int direction_x() const { return dir_x_; }
  int direction_y() const { return dir_y_; }

 private:
  double reflect(double v, int& dir) const {
    if (v > field_) {
      dir = -1;
      return std::max(0.0, 2.0 * field_ - v);
    }
    if (v < 0.0) {
      dir = 1;
      return std::min(field_, -v);
    }
    return v;
  }

  MobilityModel model_ = MobilityModel::Static;
  Position pos_;
  Position from_;
  Position to_;
  double speed_ = 0.0;
  double field_ = 0.0;
  double length_ = 0.0;
  double traveled_ = 0.0;
  int dir_x_ = 1;
  int dir_y_ = 1;
  std::mt19937_64 rng_;
};

}  // namespace wsn
