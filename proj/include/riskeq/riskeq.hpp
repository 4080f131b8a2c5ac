// Copyright 2026 The riskeq Authors
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

#include "riskeq/dimacs.hpp"
#include "riskeq/equilibrium.hpp"
#include "riskeq/gadgets.hpp"
#include "riskeq/game.hpp"
#include "riskeq/json_io.hpp"
#include "riskeq/linalg.hpp"
#include "riskeq/properties.hpp"
#include "riskeq/random.hpp"
#include "riskeq/scalar.hpp"
#include "riskeq/scheduling.hpp"
#include "riskeq/valuation.hpp"
