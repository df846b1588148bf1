#include "itre/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace itre::kernels {

const Table* avx2_table_impl();

const Table* avx2_table() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return avx2_table_impl();
#endif
  return nullptr;
}

namespace {

const Table& pick() {
  if (const char* env = std::getenv("ITRE_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return scalar_table();
    if (std::strcmp(env, "avx2") == 0) {
      if (const Table* t = avx2_table()) return *t;
      return scalar_table();  // requested backend unavailable
    }
  }
  if (const Table* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const Table& active() {
  static const Table& t = pick();
  return t;
}

}  // namespace itre::kernels
