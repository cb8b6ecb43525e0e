// Copyright 2026 The Polyrenorm Authors
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

#include "polyrenorm/core.hpp"
#include "polyrenorm/hereditary.hpp"
#include "polyrenorm/luxemburg.hpp"
#include "polyrenorm/nakano.hpp"
#include "polyrenorm/orlicz.hpp"
#include "polyrenorm/partition.hpp"
#include "polyrenorm/pipeline.hpp"
#include "polyrenorm/polytope.hpp"
#include "polyrenorm/renorm.hpp"
#include "polyrenorm/report.hpp"
#include "polyrenorm/sampling.hpp"
#include "polyrenorm/space.hpp"
#include "polyrenorm/star.hpp"
#include "polyrenorm/version.hpp"
