#include "unishear/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <new>

namespace unishear {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

template <class T>
AlignedBuffer<T>::AlignedBuffer(std::size_t n) : n_(n) {
  p_ = static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)));
  if (!p_) throw std::bad_alloc();
  zero();
}

template <class T>
AlignedBuffer<T>::~AlignedBuffer() {
  if (p_) fftw_free(p_);
}

template <class T>
AlignedBuffer<T>& AlignedBuffer<T>::operator=(AlignedBuffer&& o) noexcept {
  if (this != &o) {
    if (p_) fftw_free(p_);
    p_ = o.p_;
    n_ = o.n_;
    o.p_ = nullptr;
    o.n_ = 0;
  }
  return *this;
}

template <class T>
void AlignedBuffer<T>::zero() {
  if (p_) std::memset(static_cast<void*>(p_), 0, sizeof(T) * n_);
}

template class AlignedBuffer<double>;
template class AlignedBuffer<cplx>;

struct Fft2d::Plans {
  fftw_plan r2c = nullptr, c2r = nullptr, fwd = nullptr, inv = nullptr;
};

Fft2d::Fft2d(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  AlignedBuffer<double> r(full_size());
  AlignedBuffer<cplx> h(half_size());
  AlignedBuffer<cplx> a(full_size()), b(full_size());
  auto* hc = reinterpret_cast<fftw_complex*>(h.data());
  auto* ac = reinterpret_cast<fftw_complex*>(a.data());
  auto* bc = reinterpret_cast<fftw_complex*>(b.data());
  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c_2d(n, n, r.data(), hc, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_2d(n, n, hc, r.data(), FFTW_ESTIMATE);
  plans_->fwd = fftw_plan_dft_2d(n, n, ac, bc, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->inv = fftw_plan_dft_2d(n, n, ac, bc, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c);
  fftw_destroy_plan(plans_->c2r);
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->inv);
}

void Fft2d::r2c(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void Fft2d::c2r(cplx* in, double* out) const {
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(in), out);
}

void Fft2d::c2c_forward(const cplx* in, cplx* out) const {
  fftw_execute_dft(plans_->fwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void Fft2d::c2c_inverse(const cplx* in, cplx* out) const {
  fftw_execute_dft(plans_->inv, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace unishear
