#include "masp/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace masp {

namespace {

double frac(double v) { return v - std::floor(v); }

}  // namespace

ChaosParams ChaosParams::make(double x0, double y0, double alpha, double dt, Index block_len) {
  ChaosParams p;
  p.x0 = x0;
  p.y0 = y0;
  p.alpha = alpha;
  p.beta = std::sqrt(1.0 - alpha * alpha);
  p.dt = dt;
  p.block_len = block_len;
  p.validate();
  return p;
}

void ChaosParams::validate() const {
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw Error("chaos params: non-finite seed");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("chaos params: alpha must lie in (0, 1)");
  if (!(std::abs(alpha * alpha + beta * beta - 1.0) <= 1e-12))
    throw Error("chaos params: beta must equal sqrt(1 - alpha^2)");
  if (!(dt > 0.0)) throw Error("chaos params: dt must be positive");
  if (block_len < 1) throw Error("chaos params: block_len must be >= 1");
  if (dt * static_cast<double>(block_len) * alpha > 30.0)
    throw Error("chaos params: dt * block_len * alpha exceeds 30");
}

ChaosParams ChaosParams::with_seed(double sx, double sy) const {
  ChaosParams p = *this;
  p.x0 = sx;
  p.y0 = sy;
  return p;
}

ChaosSequence chaos_generate(const ChaosParams& p, Index n) {
  p.validate();
  if (n < 1) throw Error("chaos_generate: n must be >= 1");

  ChaosSequence seq{Eigen::ArrayXd(n), Eigen::ArrayXd(n), p};
  double x0 = p.x0;
  double y0 = p.y0;
  for (Index start = 0; start < n; start += p.block_len) {
    const Index m = std::min(p.block_len, n - start);
    Eigen::ArrayXd t(m);
    for (Index k = 0; k < m; ++k) t[k] = static_cast<double>(k) * p.dt;
    auto [xs, ys] = chaos_state<double>(x0, y0, p.alpha, p.beta, t);
    seq.xs.segment(start, m) = xs;
    seq.ys.segment(start, m) = ys;
    x0 = frac(std::abs(xs[m - 1])) + 0.1;
    y0 = frac(std::abs(ys[m - 1])) + 0.1;
  }
  return seq;
}

RegionSeed derive_region_seed(const ChaosParams& master, Index region_index) {
  if (region_index < 0) throw Error("derive_region_seed: negative region index");
  const double i = static_cast<double>(region_index);
  return {frac(master.x0 + i * kSeedStrideX) + 0.1, frac(master.y0 + i * kSeedStrideY) + 0.1};
}

std::vector<std::uint32_t> argsort_permutation(const Eigen::Ref<const Eigen::ArrayXd>& xs) {
  // Sorting (value, index) pairs orders ties by index, i.e. a stable argsort.
  std::vector<std::pair<double, std::uint32_t>> keyed(static_cast<std::size_t>(xs.size()));
  for (Index i = 0; i < xs.size(); ++i)
    keyed[static_cast<std::size_t>(i)] = {xs[i], static_cast<std::uint32_t>(i)};
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::uint32_t> perm(keyed.size());
  std::transform(keyed.begin(), keyed.end(), perm.begin(), [](const auto& k) { return k.second; });
  return perm;
}

std::vector<std::uint8_t> quantize_keystream(const Eigen::Ref<const Eigen::ArrayXd>& ys,
                                             double gain) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(ys.size()));
  for (Index j = 0; j < ys.size(); ++j) {
    const double v = std::abs(ys[j]) * gain;
    // Exact equivalent of fmod(v, 256) for finite v >= 0; scaling by 256 is exact.
    const double r = v - 256.0 * std::floor(v / 256.0);
    out[static_cast<std::size_t>(j)] =
        std::isfinite(r) ? static_cast<std::uint8_t>(std::floor(r)) : std::uint8_t{0};
  }
  return out;
}

RegionKey build_region_key(const ChaosParams& p, Index n_pixels) {
  if (n_pixels < 1) throw Error("build_region_key: region must contain at least one pixel");
  const ChaosSequence seq = chaos_generate(p, 3 * n_pixels);
  return {argsort_permutation(seq.xs.head(n_pixels)), quantize_keystream(seq.ys)};
}

namespace {

void check_key(const RgbImage& img, const WindowRegion& r, const RegionKey& key) {
  if (!r.inside(img.width, img.height)) throw Error("scramble: region outside image");
  if (key.size() != r.area() || key.keystream.size() != 3 * key.permutation.size())
    throw Error("scramble: key size does not match region");
}

PixelRows gather(const RgbImage& img, const WindowRegion& r) {
  PixelRows out(r.area(), 3);
  for (Index row = 0; row < r.h; ++row)
    out.middleRows(row * r.w, r.w) = img.px.middleRows((r.y + row) * img.width + r.x, r.w);
  return out;
}

void scatter(RgbImage& img, const WindowRegion& r, const PixelRows& block) {
  for (Index row = 0; row < r.h; ++row)
    img.px.middleRows((r.y + row) * img.width + r.x, r.w) = block.middleRows(row * r.w, r.w);
}

void xor_keystream(PixelRows& block, const std::vector<std::uint8_t>& ks) {
  std::uint8_t* b = block.data();
  for (std::size_t j = 0; j < ks.size(); ++j) b[j] ^= ks[j];
}

}  // namespace

void scramble_region_inplace(RgbImage& img, const WindowRegion& r, const RegionKey& key) {
  check_key(img, r, key);
  const PixelRows src = gather(img, r);
  PixelRows mixed(src.rows(), 3);
  for (Index i = 0; i < src.rows(); ++i) mixed.row(key.permutation[i]) = src.row(i);
  xor_keystream(mixed, key.keystream);
  scatter(img, r, mixed);
}

void descramble_region_inplace(RgbImage& img, const WindowRegion& r, const RegionKey& key) {
  check_key(img, r, key);
  PixelRows mixed = gather(img, r);
  xor_keystream(mixed, key.keystream);
  PixelRows src(mixed.rows(), 3);
  for (Index i = 0; i < mixed.rows(); ++i) src.row(i) = mixed.row(key.permutation[i]);
  scatter(img, r, src);
}

RgbImage scramble_region(const RgbImage& img, const WindowRegion& r, const RegionKey& key) {
  RgbImage out = img;
  scramble_region_inplace(out, r, key);
  return out;
}

RgbImage descramble_region(const RgbImage& img, const WindowRegion& r, const RegionKey& key) {
  RgbImage out = img;
  descramble_region_inplace(out, r, key);
  return out;
}

}  // namespace masp
