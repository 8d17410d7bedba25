#include "ektau/isometry.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "ektau/jet.hpp"

namespace ektau {

std::string to_string(MotionKind kind) {
  switch (kind) {
    case MotionKind::VerticalTranslation: return "vertical-translation";
    case MotionKind::FiberRotation: return "fiber-rotation";
    case MotionKind::HorizontalTranslation: return "horizontal-translation";
    case MotionKind::HalfTurn: return "pi-rotation-about-horizontal-geodesic";
  }
  return "unknown";
}

Isometry Isometry::then(const Isometry& other) const {
  std::vector<Motion> all = motions_;
  all.insert(all.end(), other.motions_.begin(), other.motions_.end());
  return Isometry(std::move(all));
}

Isometry Isometry::inverse() const {
  std::vector<Motion> inv;
  inv.reserve(motions_.size());
  for (auto it = motions_.rbegin(); it != motions_.rend(); ++it) {
    Motion m = *it;
    if (m.kind != MotionKind::HalfTurn) {
      m.a = -m.a;
      m.b = -m.b;
    }
    inv.push_back(m);
  }
  return Isometry(std::move(inv));
}

void Isometry::validate(const SpaceParams& sp) const {
  for (const Motion& m : motions_) {
    if (m.kind == MotionKind::HorizontalTranslation && sp.k != 0.0) {
      throw Unsupported("horizontal translations are implemented for k = 0 only");
    }
  }
}

Vec3 Isometry::apply(const SpaceParams& sp, const Vec3& p) const {
  const auto q = apply<double>(sp, {p.x(), p.y(), p.z()});
  return {q[0], q[1], q[2]};
}

Mat3 Isometry::differential(const SpaceParams& sp, const Vec3& p) const {
  const auto q = apply<Jet3>(sp, {Jet3::variable(p.x(), 0), Jet3::variable(p.y(), 1),
                                  Jet3::variable(p.z(), 2)});
  Mat3 d;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d(i, j) = q[i].d[j];
  return d;
}

std::string Isometry::describe() const {
  if (motions_.empty()) return "identity";
  std::ostringstream os;
  for (std::size_t i = 0; i < motions_.size(); ++i) {
    const Motion& m = motions_[i];
    if (i) os << " then ";
    os << to_string(m.kind) << "(" << m.a;
    if (m.kind == MotionKind::HorizontalTranslation) os << ", " << m.b;
    os << ")";
  }
  return os.str();
}

double isometry_residual(const Space& space, const Isometry& iso, int samples,
                         unsigned long long seed) {
  iso.validate(space.params());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> planar(-1.0, 1.0);
  std::uniform_real_distribution<double> vertical(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec3 p(planar(rng), planar(rng), vertical(rng));
    const Vec3 q = iso.apply(space.params(), p);
    const Mat3 d = iso.differential(space.params(), p);
    const Mat3 pulled = d.transpose() * space.metric(q) * d;
    worst = std::max(worst, (pulled - space.metric(p)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace ektau
