#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

namespace clmri::kspace {

using Complex = std::complex<double>;

enum class Domain { image, kspace };

// Dense 2-D complex array in either the image or the k-space domain.
// Dimensions must be even and >= 8 so that the centered transforms are
// well defined.
struct ComplexImage {
  int height = 0;
  int width = 0;
  Domain domain = Domain::image;
  std::vector<Complex> data;  // row-major

  ComplexImage() = default;
  ComplexImage(int h, int w, Domain d);

  Complex& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
  const Complex& at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }
  std::size_t size() const { return data.size(); }
  double norm2() const;  // Euclidean norm over all entries
};

// Dense 2-D real array (magnitude images, metrics inputs).
struct RealImage {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  RealImage() = default;
  RealImage(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
  const double& at(int r, int c) const { return data[static_cast<std::size_t>(r) * width + c]; }
  std::size_t size() const { return data.size(); }
};

enum class MaskKind { random, equispaced };

// Per-column (phase-encode line) Cartesian undersampling mask.
struct SamplingMask {
  int width = 0;
  std::vector<std::uint8_t> kept;   // one flag per column
  double acceleration = 1.0;        // nominal, as requested
  double effective_acceleration = 1.0;  // width / kept_count
  double center_fraction = 0.0;
  MaskKind kind = MaskKind::random;
  std::uint64_t seed = 0;           // random masks
  int offset = 0;                   // equispaced masks

  int kept_count() const;
};

struct CoilSet {
  int num_coils = 0;
  std::vector<ComplexImage> sensitivities;  // image domain, one per coil
};

constexpr double kNoNoise = std::numeric_limits<double>::infinity();

// Centered, orthonormal 2-D DFT pair. fft2c maps image -> k-space with the
// DC component at (height/2, width/2); ifft2c is its exact inverse. Both
// preserve the Euclidean norm.
ComplexImage fft2c(const ComplexImage& img);
ComplexImage ifft2c(const ComplexImage& ksp);

// In-place centered orthonormal transform on a raw row-major buffer; used by
// the differentiable data-consistency path. Dimensions must be even.
void fft2c_inplace(Complex* data, int height, int width, bool inverse);

// Center-block convention: c = floor(center_fraction * width) columns
// starting at (width - c + 1) / 2.
int center_block_size(int width, double center_fraction);
int center_block_start(int width, int block_size);

// Default center fraction per acceleration (0.08 at 4X, 0.04 at 8X, 1/R
// scaling elsewhere: 0.32 / R).
double default_center_fraction(double acceleration);

SamplingMask make_random_mask(int width, double acceleration, double center_fraction,
                              std::uint64_t seed);
SamplingMask make_equispaced_mask(int width, double acceleration, double center_fraction,
                                  int offset);

ComplexImage apply_mask(const ComplexImage& ksp, const SamplingMask& mask);

// Adds circularly-symmetric complex Gaussian noise to the sampled (nonzero)
// entries so that signal power / noise power matches snr_db. Passing
// kNoNoise returns the input unchanged.
ComplexImage add_noise_at_snr(const ComplexImage& ksp, double snr_db, std::uint64_t seed);

// Smooth synthetic coil sensitivities, normalized so the root-sum-of-squares
// equals one at every pixel.
CoilSet simulate_coils(int num_coils, int height, int width, std::uint64_t seed);

RealImage coil_combine_rss(const std::vector<ComplexImage>& coil_images);

}  // namespace clmri::kspace
