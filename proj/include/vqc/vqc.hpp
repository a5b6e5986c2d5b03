// Copyright 2026 The vqc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "batch.hpp"
#include "bench.hpp"
#include "circuit.hpp"
#include "error.hpp"
#include "gradients.hpp"
#include "instrumentation.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "optimizer.hpp"
#include "serialization.hpp"
#include "state_vector.hpp"
#include "tasks/cartpole.hpp"
#include "tasks/dataset.hpp"
#include "tasks/training.hpp"
#include "tensor.hpp"
#include "thread_pool.hpp"
