// Copyright 2026 The Musielak Galerkin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "musielak/balance.hpp"
#include "musielak/basis.hpp"
#include "musielak/conjugate.hpp"
#include "musielak/errors.hpp"
#include "musielak/fem.hpp"
#include "musielak/field.hpp"
#include "musielak/format.hpp"
#include "musielak/galerkin.hpp"
#include "musielak/modular.hpp"
#include "musielak/nfunction.hpp"
#include "musielak/problem.hpp"
#include "musielak/report.hpp"
#include "musielak/sampling.hpp"
#include "musielak/scalar_search.hpp"
#include "musielak/study.hpp"
#include "musielak/vec.hpp"
#include "musielak/young_function.hpp"
