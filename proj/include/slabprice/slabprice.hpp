// Copyright 2026 The slabprice Authors
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

#include "slabprice/commands.hpp"
#include "slabprice/csv.hpp"
#include "slabprice/demand.hpp"
#include "slabprice/equilibrium.hpp"
#include "slabprice/error.hpp"
#include "slabprice/membership.hpp"
#include "slabprice/price_response.hpp"
#include "slabprice/revenue.hpp"
#include "slabprice/scenario.hpp"
#include "slabprice/simulate.hpp"
