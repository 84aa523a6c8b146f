#include "sfradar/kernels/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace sfr::kernels {

namespace {

std::atomic<const detail::Ops*> g_ops{nullptr};
std::atomic<const char*> g_name{nullptr};

const detail::Ops* resolve_auto(const char** name) {
  if (const detail::Ops* v = detail::avx2_ops()) {
    *name = "avx2";
    return v;
  }
  *name = "scalar";
  return &detail::scalar_ops();
}

const detail::Ops& ops() {
  const detail::Ops* p = g_ops.load(std::memory_order_acquire);
  if (p == nullptr) {
    const char* name = nullptr;
    p = resolve_auto(&name);
    g_name.store(name, std::memory_order_relaxed);
    g_ops.store(p, std::memory_order_release);
  }
  return *p;
}

}  // namespace

cd cdotu(const cd* x, const cd* y, std::size_t n) { return ops().cdotu(x, y, n); }
cd cdotc(const cd* x, const cd* y, std::size_t n) { return ops().cdotc(x, y, n); }
void caxpy(cd a, const cd* x, cd* y, std::size_t n) { ops().caxpy(a, x, y, n); }
void caxpy_conj(cd a, const cd* x, cd* y, std::size_t n) {
  ops().caxpy_conj(a, x, y, n);
}
double norm2sq(const cd* x, std::size_t n) { return ops().norm2sq(x, n); }

std::string_view active_backend() {
  ops();
  return g_name.load(std::memory_order_relaxed);
}

void select_backend(std::string_view name) {
  if (name == "auto") {
    const char* n = nullptr;
    const detail::Ops* p = resolve_auto(&n);
    g_name.store(n, std::memory_order_relaxed);
    g_ops.store(p, std::memory_order_release);
  } else if (name == "scalar") {
    g_name.store("scalar", std::memory_order_relaxed);
    g_ops.store(&detail::scalar_ops(), std::memory_order_release);
  } else if (name == "avx2") {
    const detail::Ops* p = detail::avx2_ops();
    if (p == nullptr) {
      throw std::invalid_argument("avx2 backend not available on this CPU");
    }
    g_name.store("avx2", std::memory_order_relaxed);
    g_ops.store(p, std::memory_order_release);
  } else {
    throw std::invalid_argument("unknown kernel backend: " + std::string(name));
  }
}

}  // namespace sfr::kernels
