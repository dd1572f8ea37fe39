#include "clmri/kspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "clmri/rng.hpp"

namespace clmri::kspace {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, unnormalized. inverse selects the
// conjugate twiddles (no 1/n scaling here).
void fft_pow2(Complex* a, int n, bool inverse) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / len;
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein chirp-z for arbitrary lengths, unnormalized.
void fft_bluestein(Complex* a, int n, bool inverse) {
  int m = 1;
  while (m < 2 * n - 1) m <<= 1;
  std::vector<Complex> chirp(n), fa(m, Complex(0.0, 0.0)), fb(m, Complex(0.0, 0.0));
  for (int k = 0; k < n; ++k) {
    // angle = pi * k^2 / n, reduced mod 2n to keep the argument small
    const long long k2 = (static_cast<long long>(k) * k) % (2LL * n);
    const double ang = (inverse ? 1.0 : -1.0) * kPi * static_cast<double>(k2) / n;
    chirp[k] = Complex(std::cos(ang), std::sin(ang));
  }
  for (int k = 0; k < n; ++k) fa[k] = a[k] * chirp[k];
  fb[0] = std::conj(chirp[0]);
  for (int k = 1; k < n; ++k) fb[k] = fb[m - k] = std::conj(chirp[k]);
  fft_pow2(fa.data(), m, false);
  fft_pow2(fb.data(), m, false);
  for (int k = 0; k < m; ++k) fa[k] *= fb[k];
  fft_pow2(fa.data(), m, true);
  const double scale = 1.0 / m;  // undo the unnormalized round trip
  for (int k = 0; k < n; ++k) a[k] = fa[k] * chirp[k] * scale;
}

void fft_1d(Complex* a, int n, bool inverse) {
  if (n == 1) return;
  if (is_pow2(n)) {
    fft_pow2(a, n, inverse);
  } else {
    fft_bluestein(a, n, inverse);
  }
}

// Swap quadrants; for even dimensions fftshift and ifftshift coincide.
void shift2(Complex* data, int h, int w) {
  const int hh = h / 2, hw = w / 2;
  for (int r = 0; r < hh; ++r) {
    Complex* top = data + static_cast<std::size_t>(r) * w;
    Complex* bot = data + static_cast<std::size_t>(r + hh) * w;
    for (int c = 0; c < hw; ++c) {
      std::swap(top[c], bot[c + hw]);
      std::swap(top[c + hw], bot[c]);
    }
  }
}

void check_dims(int h, int w) {
  if (h < 8 || w < 8 || h % 2 != 0 || w % 2 != 0) {
    throw std::invalid_argument("ComplexImage dimensions must be even and >= 8, got " +
                                std::to_string(h) + "x" + std::to_string(w));
  }
}

}  // namespace

ComplexImage::ComplexImage(int h, int w, Domain d)
    : height(h), width(w), domain(d), data(static_cast<std::size_t>(h) * w, Complex(0.0, 0.0)) {
  check_dims(h, w);
}

double ComplexImage::norm2() const {
  double s = 0.0;
  for (const Complex& z : data) s += std::norm(z);
  return std::sqrt(s);
}

int SamplingMask::kept_count() const {
  return static_cast<int>(std::count(kept.begin(), kept.end(), std::uint8_t{1}));
}

void fft2c_inplace(Complex* data, int height, int width, bool inverse) {
  shift2(data, height, width);
  std::vector<Complex> col(height);
  for (int r = 0; r < height; ++r) fft_1d(data + static_cast<std::size_t>(r) * width, width, inverse);
  for (int c = 0; c < width; ++c) {
    for (int r = 0; r < height; ++r) col[r] = data[static_cast<std::size_t>(r) * width + c];
    fft_1d(col.data(), height, inverse);
    for (int r = 0; r < height; ++r) data[static_cast<std::size_t>(r) * width + c] = col[r];
  }
  shift2(data, height, width);
  const double scale = 1.0 / std::sqrt(static_cast<double>(height) * width);
  const std::size_t n = static_cast<std::size_t>(height) * width;
  for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
}

ComplexImage fft2c(const ComplexImage& img) {
  if (img.domain != Domain::image) {
    throw std::invalid_argument("fft2c expects an image-domain input");
  }
  ComplexImage out = img;
  out.domain = Domain::kspace;
  fft2c_inplace(out.data.data(), out.height, out.width, /*inverse=*/false);
  return out;
}

ComplexImage ifft2c(const ComplexImage& ksp) {
  if (ksp.domain != Domain::kspace) {
    throw std::invalid_argument("ifft2c expects a k-space input");
  }
  ComplexImage out = ksp;
  out.domain = Domain::image;
  fft2c_inplace(out.data.data(), out.height, out.width, /*inverse=*/true);
  return out;
}

int center_block_size(int width, double center_fraction) {
  return static_cast<int>(std::floor(center_fraction * width));
}

int center_block_start(int width, int block_size) { return (width - block_size + 1) / 2; }

double default_center_fraction(double acceleration) { return 0.32 / acceleration; }

namespace {

void check_mask_args(int width, double acceleration, double center_fraction) {
  if (width < 2) throw std::invalid_argument("mask width must be >= 2");
  if (acceleration < 1.0) throw std::invalid_argument("acceleration must be >= 1");
  if (center_fraction < 0.0 || center_fraction >= 1.0) {
    throw std::invalid_argument("center_fraction must lie in [0, 1)");
  }
}

}  // namespace

SamplingMask make_random_mask(int width, double acceleration, double center_fraction,
                              std::uint64_t seed) {
  check_mask_args(width, acceleration, center_fraction);
  const int budget = static_cast<int>(std::llround(width / acceleration));
  const int block = center_block_size(width, center_fraction);
  if (budget < block) {
    throw std::invalid_argument("center block (" + std::to_string(block) +
                                " lines) exceeds the sampling budget of " + std::to_string(budget));
  }
  SamplingMask mask;
  mask.width = width;
  mask.kept.assign(width, 0);
  mask.acceleration = acceleration;
  mask.center_fraction = center_fraction;
  mask.kind = MaskKind::random;
  mask.seed = seed;

  const int start = center_block_start(width, block);
  for (int c = start; c < start + block; ++c) mask.kept[c] = 1;

  std::vector<int> pool;
  pool.reserve(width - block);
  for (int c = 0; c < width; ++c) {
    if (!mask.kept[c]) pool.push_back(c);
  }
  Rng rng(seed);
  int remaining = budget - block;
  // partial Fisher-Yates draw without replacement
  for (int i = 0; i < remaining; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(pool.size() - i));
    std::swap(pool[i], pool[j]);
    mask.kept[pool[i]] = 1;
  }
  mask.effective_acceleration = static_cast<double>(width) / mask.kept_count();
  return mask;
}

SamplingMask make_equispaced_mask(int width, double acceleration, double center_fraction,
                                  int offset) {
  check_mask_args(width, acceleration, center_fraction);
  const int stride = static_cast<int>(std::llround(acceleration));
  if (offset < 0 || offset >= stride) {
    throw std::invalid_argument("equispaced offset " + std::to_string(offset) +
                                " out of range [0, " + std::to_string(stride) + ")");
  }
  SamplingMask mask;
  mask.width = width;
  mask.kept.assign(width, 0);
  mask.acceleration = acceleration;
  mask.center_fraction = center_fraction;
  mask.kind = MaskKind::equispaced;
  mask.offset = offset;
  for (int c = offset; c < width; c += stride) mask.kept[c] = 1;
  const int block = center_block_size(width, center_fraction);
  const int start = center_block_start(width, block);
  for (int c = start; c < start + block; ++c) mask.kept[c] = 1;
  mask.effective_acceleration = static_cast<double>(width) / mask.kept_count();
  return mask;
}

ComplexImage apply_mask(const ComplexImage& ksp, const SamplingMask& mask) {
  if (ksp.width != mask.width) {
    throw std::invalid_argument("mask width " + std::to_string(mask.width) +
                                " does not match k-space width " + std::to_string(ksp.width));
  }
  ComplexImage out = ksp;
  for (int r = 0; r < out.height; ++r) {
    for (int c = 0; c < out.width; ++c) {
      if (!mask.kept[c]) out.at(r, c) = Complex(0.0, 0.0);
    }
  }
  return out;
}

ComplexImage add_noise_at_snr(const ComplexImage& ksp, double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0) return ksp;
  double power = 0.0;
  std::size_t sampled = 0;
  for (const Complex& z : ksp.data) {
    if (z != Complex(0.0, 0.0)) {
      power += std::norm(z);
      ++sampled;
    }
  }
  if (sampled == 0) throw std::invalid_argument("add_noise_at_snr: input has zero energy");
  power /= static_cast<double>(sampled);
  const double noise_power = power / std::pow(10.0, snr_db / 10.0);
  const double sigma = std::sqrt(noise_power / 2.0);  // per component
  ComplexImage out = ksp;
  Rng rng(seed);
  for (Complex& z : out.data) {
    if (z != Complex(0.0, 0.0)) {
      z += Complex(sigma * rng.gaussian(), sigma * rng.gaussian());
    }
  }
  return out;
}

CoilSet simulate_coils(int num_coils, int height, int width, std::uint64_t seed) {
  if (num_coils < 1 || num_coils > 8) {
    throw std::invalid_argument("num_coils must lie in [1, 8]");
  }
  check_dims(height, width);
  CoilSet set;
  set.num_coils = num_coils;
  Rng rng(mix_seed(seed, 0x5ca1ab1eULL));
  const double radius = 0.35 * std::min(height, width);
  for (int c = 0; c < num_coils; ++c) {
    const double theta = 2.0 * kPi * c / num_coils + rng.uniform(-0.15, 0.15);
    const double cy = height / 2.0 + radius * std::sin(theta);
    const double cx = width / 2.0 + radius * std::cos(theta);
    const double sigma = (0.45 + 0.15 * rng.uniform()) * std::min(height, width);
    const double pr = rng.uniform(-1.5, 1.5);  // phase ramp slopes, radians over the FOV
    const double pc = rng.uniform(-1.5, 1.5);
    const double p0 = rng.uniform(-kPi, kPi);
    ComplexImage s(height, width, Domain::image);
    for (int r = 0; r < height; ++r) {
      for (int x = 0; x < width; ++x) {
        const double dy = r - cy, dx = x - cx;
        const double mag = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
        const double phase = p0 + pr * (static_cast<double>(r) / height) +
                             pc * (static_cast<double>(x) / width);
        s.at(r, x) = Complex(mag * std::cos(phase), mag * std::sin(phase));
      }
    }
    set.sensitivities.push_back(std::move(s));
  }
  // normalize: root-sum-of-squares of the maps equals one at every pixel
  const std::size_t n = static_cast<std::size_t>(height) * width;
  for (std::size_t i = 0; i < n; ++i) {
    double rss = 0.0;
    for (const ComplexImage& s : set.sensitivities) rss += std::norm(s.data[i]);
    rss = std::sqrt(rss);
    for (ComplexImage& s : set.sensitivities) s.data[i] /= rss;
  }
  return set;
}

RealImage coil_combine_rss(const std::vector<ComplexImage>& coil_images) {
  if (coil_images.empty()) throw std::invalid_argument("coil_combine_rss: empty coil list");
  const int h = coil_images.front().height, w = coil_images.front().width;
  for (const ComplexImage& img : coil_images) {
    if (img.height != h || img.width != w) {
      throw std::invalid_argument("coil_combine_rss: coil image dimensions differ");
    }
  }
  RealImage out(h, w);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (const ComplexImage& img : coil_images) s += std::norm(img.data[i]);
    out.data[i] = std::sqrt(s);
  }
  return out;
}

}  // namespace clmri::kspace
