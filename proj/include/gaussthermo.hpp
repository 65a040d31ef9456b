// Copyright 2026 The gaussthermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "gaussthermo/errors.hpp"
#include "gaussthermo/linalg.hpp"
#include "gaussthermo/gaussian.hpp"
#include "gaussthermo/dynamics.hpp"
#include "gaussthermo/geometry.hpp"
#include "gaussthermo/metrology.hpp"
#include "gaussthermo/parallel.hpp"
#include "gaussthermo/sampler.hpp"
#include "gaussthermo/experiments.hpp"
