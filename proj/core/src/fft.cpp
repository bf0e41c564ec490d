#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>

namespace driftlab::detail {

namespace {

// The FFTW planner is not thread safe; execution with a cached plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan plan_for(std::size_t n) {
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard lock(planner_mutex());
  if (auto it = plans.find(n); it != plans.end()) {
    return it->second;
  }
  ComplexBuffer scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  plans.emplace(n, plan);
  return plan;
}

}  // namespace

void ComplexBuffer::Deleter::operator()(std::complex<double>* p) const noexcept {
  fftw_free(p);
}

ComplexBuffer::ComplexBuffer(std::size_t size)
    : data_(static_cast<std::complex<double>*>(fftw_malloc(sizeof(std::complex<double>) * size))),
      size_(size) {
  if (!data_) {
    throw std::bad_alloc();
  }
  for (std::size_t i = 0; i < size; ++i) {
    new (&data_[i]) std::complex<double>(0.0, 0.0);
  }
}

void forward_dft(ComplexBuffer& buffer) {
  auto* p = reinterpret_cast<fftw_complex*>(buffer.data());
  fftw_execute_dft(plan_for(buffer.size()), p, p);
}

}  // namespace driftlab::detail
