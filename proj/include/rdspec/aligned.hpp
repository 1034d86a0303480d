#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace rdspec {

// 64-byte aligned storage so FFTW plans and AVX loads see the same alignment
// for every field in a run.
template <class T, std::size_t Alignment = 64>
struct AlignedAllocator {
  using value_type = T;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Alignment>&) noexcept {}

  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Alignment>;
  };

  T* allocate(std::size_t count) {
    return static_cast<T*>(::operator new(count * sizeof(T), std::align_val_t{Alignment}));
  }
  void deallocate(T* ptr, std::size_t) noexcept {
    ::operator delete(ptr, std::align_val_t{Alignment});
  }

  template <class U>
  bool operator==(const AlignedAllocator<U, Alignment>&) const noexcept {
    return true;
  }
};

using Complex = std::complex<double>;
using RealField = std::vector<double, AlignedAllocator<double>>;
using ComplexField = std::vector<Complex, AlignedAllocator<Complex>>;

}  // namespace rdspec
