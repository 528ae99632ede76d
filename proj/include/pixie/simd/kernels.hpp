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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Dense arithmetic used by the graph compiler (topic-vector similarity and
// averaging) and by count combination. Each kernel has a scalar reference
// and an AVX2 variant; the variant is picked once at startup from CPUID and
// can be pinned with PIXIE_SIMD=scalar|avx2.
namespace pixie::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

Isa detected_isa();  // best variant this CPU supports
Isa active_isa();
// Switches every subsequent dispatched call. Throws Error(kConfig) when the
// CPU lacks the requested ISA.
void force_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
double sum_squares(std::span<const double> a);
double sum(std::span<const double> a);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// out[i] = sqrt(in[i])
void sqrt_counts(std::span<const std::uint32_t> in, std::span<double> out);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
double sum(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void sqrt_counts(const std::uint32_t* in, double* out, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PIXIE_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
double sum(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void sqrt_counts(const std::uint32_t* in, double* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace pixie::simd
