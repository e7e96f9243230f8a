#pragma once

#include "masp/image.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace masp {

inline constexpr double kDefaultAlpha = 0.005;
inline constexpr double kDefaultDt = 0.1;
inline constexpr Index kDefaultBlockLen = 4096;

/// Seed material for the scrambler: initial conditions (x0, y0) of
///   x'' - 2*alpha*x' + x = 0,   y = x',
/// with beta = sqrt(1 - alpha^2). Samples are taken every dt and the
/// trajectory is restarted every block_len samples to bound e^(alpha*t).
struct ChaosParams {
  double x0 = 0.3;
  double y0 = 0.7;
  double alpha = kDefaultAlpha;
  double beta = std::sqrt(1.0 - kDefaultAlpha * kDefaultAlpha);
  double dt = kDefaultDt;
  Index block_len = kDefaultBlockLen;

  /// Builds params with beta derived from alpha. Throws Error if invalid.
  static ChaosParams make(double x0, double y0, double alpha = kDefaultAlpha,
                          double dt = kDefaultDt, Index block_len = kDefaultBlockLen);

  /// Throws Error describing the first violated invariant.
  void validate() const;
  ChaosParams with_seed(double sx, double sy) const;
};

/// Closed-form state at times t (x, and y = dx/dt) for one trajectory
/// starting at (x0, y0).
template <typename Scalar, typename Derived>
std::pair<Eigen::Array<Scalar, Eigen::Dynamic, 1>, Eigen::Array<Scalar, Eigen::Dynamic, 1>>
chaos_state(Scalar x0, Scalar y0, Scalar alpha, Scalar beta, const Eigen::ArrayBase<Derived>& t) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar cx = (y0 - alpha * x0) / beta;
  const Scalar cy = alpha / beta * (y0 - alpha * x0 - beta * beta / alpha * x0);
  const Eigen::Index n = t.size();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> xs(n), ys(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Scalar tk = t[k];
    const Scalar e = exp(alpha * tk);
    const Scalar c = cos(beta * tk);
    const Scalar s = sin(beta * tk);
    xs[k] = e * (x0 * c + cx * s);
    ys[k] = e * (y0 * c + cy * s);
  }
  return {std::move(xs), std::move(ys)};
}

struct ChaosSequence {
  Eigen::ArrayXd xs;
  Eigen::ArrayXd ys;
  ChaosParams params;
};

/// n samples at t_k = (k mod block_len) * dt. Each new block restarts from
/// (frac|x_last| + 0.1, frac|y_last| + 0.1).
ChaosSequence chaos_generate(const ChaosParams& p, Index n);

struct RegionSeed {
  double x0 = 0.0;
  double y0 = 0.0;
};

inline constexpr double kSeedStrideX = 0.6180339887;
inline constexpr double kSeedStrideY = 0.7548776662;

/// Per-region initial conditions from one master seed.
RegionSeed derive_region_seed(const ChaosParams& master, Index region_index);

/// Gain applied to |y| before reducing modulo 256 into a keystream byte.
inline constexpr double kKeystreamGain = 1e10;

struct RegionKey {
  /// Pixel i of the region moves to position permutation[i].
  std::vector<std::uint32_t> permutation;
  /// XOR pad, three bytes per pixel.
  std::vector<std::uint8_t> keystream;

  Index size() const { return static_cast<Index>(permutation.size()); }
};

/// Stable ascending argsort.
std::vector<std::uint32_t> argsort_permutation(const Eigen::Ref<const Eigen::ArrayXd>& xs);
/// floor((|y| * gain) mod 256) per sample.
std::vector<std::uint8_t> quantize_keystream(const Eigen::Ref<const Eigen::ArrayXd>& ys,
                                             double gain = kKeystreamGain);

RegionKey build_region_key(const ChaosParams& p, Index n_pixels);

/// In-place variants; throw Error when the key does not match the region
/// or the region leaves the image.
void scramble_region_inplace(RgbImage& img, const WindowRegion& r, const RegionKey& key);
void descramble_region_inplace(RgbImage& img, const WindowRegion& r, const RegionKey& key);

RgbImage scramble_region(const RgbImage& img, const WindowRegion& r, const RegionKey& key);
RgbImage descramble_region(const RgbImage& img, const WindowRegion& r, const RegionKey& key);

// ---------------------------------------------------------------------------
// Sidecar record

struct RecordedRegion {
  Index index = 0;
  WindowRegion region;
  RegionSeed seed;
};

/// Everything needed to undo a frame's scrambling.
struct ScrambleRecord {
  std::string image_id = "frame";
  Index width = 0;
  Index height = 0;
  ChaosParams master;
  std::vector<RecordedRegion> regions;
};

/// Text form:
///   masp-scramble v1
///   image <id> <width> <height>
///   params <x0> <y0> <alpha> <dt> <block_len>
///   region <idx> <x> <y> <w> <h> <x0'> <y0'>      (zero or more)
/// Reals are written in shortest round-trip form.
std::string format_record(const ScrambleRecord& rec);
/// Throws RecordError on any malformed or truncated input.
ScrambleRecord parse_record(const std::string& text);

void write_record_file(const std::string& path, const ScrambleRecord& rec);
ScrambleRecord read_record_file(const std::string& path);

}  // namespace masp
