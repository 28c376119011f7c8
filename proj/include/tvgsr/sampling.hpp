#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "tvgsr/error.hpp"
#include "tvgsr/graph.hpp"
#include "tvgsr/random.hpp"

namespace tvgsr {

/// Binary N x M observation pattern J (1 = observed).
class SamplingMask {
 public:
  SamplingMask() = default;
  explicit SamplingMask(Matrix mask, std::uint64_t seed = 0) : mask_(std::move(mask)), seed_(seed) {
    detail::require_input(((mask_.array() == 0.0) || (mask_.array() == 1.0)).all(),
                          "sampling mask entries must be 0 or 1");
  }

  static SamplingMask ones(Eigen::Index n, Eigen::Index m) { return SamplingMask(Matrix::Ones(n, m)); }
  static SamplingMask zeros(Eigen::Index n, Eigen::Index m) { return SamplingMask(Matrix::Zero(n, m)); }

  const Matrix& matrix() const { return mask_; }
  Eigen::Index rows() const { return mask_.rows(); }
  Eigen::Index cols() const { return mask_.cols(); }
  std::uint64_t seed() const { return seed_; }
  bool observed(Eigen::Index i, Eigen::Index t) const { return mask_(i, t) != 0.0; }
  Eigen::Index count() const { return static_cast<Eigen::Index>(mask_.sum()); }
  double density() const {
    return mask_.size() == 0 ? 0.0 : mask_.sum() / static_cast<double>(mask_.size());
  }
  bool empty() const { return count() == 0; }

  /// FNV-1a over the entries, for checking that several methods saw the same mask.
  std::uint64_t digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::uint64_t b) {
      h ^= b;
      h *= 0x100000001b3ULL;
    };
    mix(static_cast<std::uint64_t>(rows()));
    mix(static_cast<std::uint64_t>(cols()));
    for (Eigen::Index t = 0; t < cols(); ++t)
      for (Eigen::Index i = 0; i < rows(); ++i) mix(mask_(i, t) != 0.0 ? 1 : 0);
    return h;
  }

  bool operator==(const SamplingMask& o) const {
    return rows() == o.rows() && cols() == o.cols() && mask_ == o.mask_;
  }

 private:
  Matrix mask_;
  std::uint64_t seed_ = 0;
};

namespace detail {

inline void require_density(double density) {
  require_param(std::isfinite(density) && density >= 0.0 && density <= 1.0,
                "density must lie in [0, 1], got " + std::to_string(density));
}

inline Eigen::Index rounded_count(double density, Eigen::Index total) {
  return static_cast<Eigen::Index>(std::llround(density * static_cast<double>(total)));
}

}  // namespace detail

/// Each column independently gets exactly round(density * N) observed rows.
inline SamplingMask random_entry_mask(Eigen::Index n, Eigen::Index m, double density, std::uint64_t seed) {
  detail::require_density(density);
  const Eigen::Index per_col = detail::rounded_count(density, n);
  Rng rng(seed);
  Matrix j = Matrix::Zero(n, m);
  for (Eigen::Index t = 0; t < m; ++t)
    for (long row : rng.choose(n, per_col)) j(row, t) = 1.0;
  return SamplingMask(std::move(j), seed);
}

/// round(density * M) whole snapshots observed, the rest hidden.
inline SamplingMask snapshot_mask(Eigen::Index n, Eigen::Index m, double density, std::uint64_t seed) {
  detail::require_density(density);
  Rng rng(seed);
  Matrix j = Matrix::Zero(n, m);
  for (long col : rng.choose(m, detail::rounded_count(density, m))) j.col(col).setOnes();
  return SamplingMask(std::move(j), seed);
}

/// First M - horizon snapshots observed, last `horizon` hidden.
inline SamplingMask forecasting_mask(Eigen::Index n, Eigen::Index m, Eigen::Index horizon) {
  detail::require_param(horizon >= 1 && horizon < m, "forecast horizon must satisfy 1 <= t < M (t=" +
                                                         std::to_string(horizon) +
                                                         ", M=" + std::to_string(m) + ")");
  Matrix j = Matrix::Zero(n, m);
  j.leftCols(m - horizon).setOnes();
  return SamplingMask(std::move(j));
}

struct UniquenessReport {
  bool every_node_sampled = false;          // condition 1
  bool has_fiducial_time = false;           // condition 2
  std::optional<Eigen::Index> fiducial;     // smallest valid m0 (0-based)

  bool unique() const { return every_node_sampled && has_fiducial_time; }
};

/// Sufficient conditions on J for a unique reconstruction minimizer:
///  1. every node is observed at least once;
///  2. some snapshot m0 shares an observed node with every other snapshot.
inline UniquenessReport check_uniqueness(const SamplingMask& mask) {
  const Matrix& j = mask.matrix();
  UniquenessReport r;
  r.every_node_sampled = j.rows() > 0 && (j.rowwise().maxCoeff().array() > 0.0).all();
  for (Eigen::Index m0 = 0; m0 < j.cols() && !r.fiducial; ++m0) {
    bool ok = true;
    for (Eigen::Index m = 0; m < j.cols() && ok; ++m) {
      if (m == m0) continue;
      ok = (j.col(m0).array() * j.col(m).array()).maxCoeff() > 0.0;
    }
    if (ok) r.fiducial = m0;
  }
  r.has_fiducial_time = r.fiducial.has_value();
  return r;
}

/// Y = J o X.
inline Matrix apply_mask(const SamplingMask& mask, const Matrix& x) {
  detail::require_input(mask.rows() == x.rows() && mask.cols() == x.cols(),
                        "apply_mask: mask is " + detail::shape_str(mask.rows(), mask.cols()) +
                            ", signal is " + detail::shape_str(x.rows(), x.cols()));
  return mask.matrix().cwiseProduct(x);
}

}  // namespace tvgsr
