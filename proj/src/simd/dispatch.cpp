#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rdspec/simd/kernels.hpp"

namespace rdspec::simd {

const KernelTable* avx2_kernels_unchecked();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend initial_backend() {
  const bool has_avx2 = backend_available(Backend::avx2);
  if (const char* env = std::getenv("RDSPEC_SIMD")) {
    const std::string choice(env);
    if (choice == "scalar") return Backend::scalar;
    if (choice == "avx2" && has_avx2) return Backend::avx2;
  }
  return has_avx2 ? Backend::avx2 : Backend::scalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{
      initial_backend() == Backend::avx2 ? avx2_kernels() : &scalar_kernels()};
  return table;
}

}  // namespace

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

const KernelTable* avx2_kernels() {
  static const KernelTable* table = cpu_has_avx2() ? avx2_kernels_unchecked() : nullptr;
  return table;
}

bool backend_available(Backend b) {
  return b == Backend::scalar || avx2_kernels() != nullptr;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("simd backend not available: " + std::string(backend_name(b)));
  }
  current().store(b == Backend::avx2 ? avx2_kernels() : &scalar_kernels(),
                  std::memory_order_release);
}

Backend active_backend() { return active().backend; }

}  // namespace rdspec::simd
