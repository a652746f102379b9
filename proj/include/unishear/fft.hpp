#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace unishear {

using cplx = std::complex<double>;

// fftw_malloc-backed array; all FFT inputs and outputs must live in one.
template <class T>
class AlignedBuffer {
 public:
  AlignedBuffer() = default;
  explicit AlignedBuffer(std::size_t n);
  ~AlignedBuffer();
  AlignedBuffer(AlignedBuffer&& o) noexcept : p_(o.p_), n_(o.n_) { o.p_ = nullptr, o.n_ = 0; }
  AlignedBuffer& operator=(AlignedBuffer&& o) noexcept;
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;

  T* data() { return p_; }
  const T* data() const { return p_; }
  std::size_t size() const { return n_; }
  T& operator[](std::size_t i) { return p_[i]; }
  const T& operator[](std::size_t i) const { return p_[i]; }
  void zero();

 private:
  T* p_ = nullptr;
  std::size_t n_ = 0;
};

// N x N transforms, unnormalized, forward kernel e^{-2 pi i}. Plans are made
// with FFTW_ESTIMATE so results do not depend on planner timing.
class Fft2d {
 public:
  explicit Fft2d(int n);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int n() const { return n_; }
  std::size_t half_size() const { return static_cast<std::size_t>(n_) * (n_ / 2 + 1); }
  std::size_t full_size() const { return static_cast<std::size_t>(n_) * n_; }

  void r2c(const double* in, cplx* out) const;
  // Destroys `in`.
  void c2r(cplx* in, double* out) const;
  void c2c_forward(const cplx* in, cplx* out) const;
  void c2c_inverse(const cplx* in, cplx* out) const;

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace unishear
