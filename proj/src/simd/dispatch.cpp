/*
 * Copyright 2026 The Pixie Walk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <atomic>
#include <cstdlib>
#include <string>

#include "pixie/error.hpp"
#include "pixie/simd/kernels.hpp"

namespace pixie::simd {
namespace {

struct Table {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*sqrt_counts)(const std::uint32_t*, double*, std::size_t);
};

constexpr Table kScalar{Isa::kScalar, scalar::dot, scalar::sum_squares, scalar::sum,
                        scalar::axpy, scalar::sqrt_counts};
#ifdef PIXIE_HAVE_AVX2_KERNELS
constexpr Table kAvx2{Isa::kAvx2, avx2::dot, avx2::sum_squares, avx2::sum, avx2::axpy,
                      avx2::sqrt_counts};
#endif

bool cpu_has_avx2() {
#ifdef PIXIE_HAVE_AVX2_KERNELS
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* table_for(Isa isa) {
#ifdef PIXIE_HAVE_AVX2_KERNELS
  if (isa == Isa::kAvx2) return &kAvx2;
#endif
  (void)isa;
  return &kScalar;
}

const Table* initial_table() {
  Isa isa = detected_isa();
  if (const char* env = std::getenv("PIXIE_SIMD")) {
    const std::string want(env);
    if (want == "scalar") isa = Isa::kScalar;
    // "avx2" is honored only when supported; anything else keeps detection.
  }
  return table_for(isa);
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

const Table& t() { return *current().load(std::memory_order_relaxed); }

void check_same(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::kConfig, "vector length mismatch");
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() { return t().isa; }

void force_isa(Isa isa) {
  if (isa == Isa::kAvx2 && !cpu_has_avx2()) {
    throw Error(ErrorCode::kConfig, "CPU does not support AVX2+FMA");
  }
  current().store(table_for(isa), std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same(a.size(), b.size());
  return t().dot(a.data(), b.data(), a.size());
}

double sum_squares(std::span<const double> a) { return t().sum_squares(a.data(), a.size()); }

double sum(std::span<const double> a) { return t().sum(a.data(), a.size()); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size());
  t().axpy(alpha, x.data(), y.data(), x.size());
}

void sqrt_counts(std::span<const std::uint32_t> in, std::span<double> out) {
  check_same(in.size(), out.size());
  t().sqrt_counts(in.data(), out.data(), in.size());
}

}  // namespace pixie::simd
