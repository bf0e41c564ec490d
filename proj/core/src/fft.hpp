#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace driftlab::detail {

/// fftw_malloc-backed complex buffer. FFTW's new-array execute requires the
/// alignment it planned with, which fftw_malloc guarantees.
class ComplexBuffer {
 public:
  explicit ComplexBuffer(std::size_t size);

  std::complex<double>* data() noexcept { return data_.get(); }
  const std::complex<double>* data() const noexcept { return data_.get(); }
  std::size_t size() const noexcept { return size_; }
  std::complex<double>& operator[](std::size_t i) noexcept { return data_[i]; }
  const std::complex<double>& operator[](std::size_t i) const noexcept { return data_[i]; }

 private:
  struct Deleter {
    void operator()(std::complex<double>* p) const noexcept;
  };
  std::unique_ptr<std::complex<double>[], Deleter> data_;
  std::size_t size_;
};

/// In-place forward DFT, X_k = sum_j x_j exp(-2 pi i jk / n). Thread safe.
void forward_dft(ComplexBuffer& buffer);

}  // namespace driftlab::detail
