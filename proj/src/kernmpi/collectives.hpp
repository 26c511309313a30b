/*
 * Copyright 2026 The kernmpi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <kernmpi/kernmpi.h>

#include "array_view.hpp"

namespace kmpi {

int bcast(const ArrayView& data, int root);
int scatter(const ArrayView& send, const ArrayView& recv, int root);
int gather(const ArrayView& send, const ArrayView& recv, int root);
int allgather(const ArrayView& send, const ArrayView& recv);
int allreduce(const ArrayView& send, const ArrayView& recv, kmpi_op op);

}  // namespace kmpi
