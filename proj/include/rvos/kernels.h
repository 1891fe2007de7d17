/* Copyright 2026 The rvos Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Pixel kernels over raw row-major 0/1 byte planes.
//
// Each kernel exists twice: `serial` is the straightforward reference used by
// tests and benchmarks, `omp` is the OpenMP version the library calls. Both
// must produce identical output for identical input. Callers validate shapes;
// kernels assume every span holds width * height elements.

#ifndef RVOS_KERNELS_H_
#define RVOS_KERNELS_H_

#include <cstdint>
#include <span>

namespace rvos {
namespace kernels {

using Plane = std::span<const uint8_t>;
using MutablePlane = std::span<uint8_t>;

namespace serial {

int64_t Count(Plane a);
int64_t CountAnd(Plane a, Plane b);
int64_t CountOr(Plane a, Plane b);
void AddVotes(std::span<uint32_t> counts, Plane m);
void ThresholdVotes(std::span<const uint32_t> counts, uint32_t thr,
                    MutablePlane out);
// Foreground pixels with a 4-neighbour that is background or off-image.
void Boundary(int width, int height, Plane in, MutablePlane out);
// out = in dilated by the Euclidean disk {(dx, dy) : dx^2 + dy^2 <= r^2}.
void DilateDisk(int width, int height, Plane in, int radius,
                MutablePlane out);

}  // namespace serial

namespace omp {

int64_t Count(Plane a);
int64_t CountAnd(Plane a, Plane b);
int64_t CountOr(Plane a, Plane b);
void AddVotes(std::span<uint32_t> counts, Plane m);
void ThresholdVotes(std::span<const uint32_t> counts, uint32_t thr,
                    MutablePlane out);
void Boundary(int width, int height, Plane in, MutablePlane out);
// Row-decomposed: for each vertical offset the disk is a horizontal run,
// filled from the foreground columns of the source row.
void DilateDisk(int width, int height, Plane in, int radius,
                MutablePlane out);

}  // namespace omp

}  // namespace kernels
}  // namespace rvos

#endif  // RVOS_KERNELS_H_
