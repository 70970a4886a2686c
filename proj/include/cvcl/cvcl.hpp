// Copyright 2026 The cvcl Authors
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

#include "cvcl/channels.hpp"
#include "cvcl/common.hpp"
#include "cvcl/config.hpp"
#include "cvcl/dynamics.hpp"
#include "cvcl/eig.hpp"
#include "cvcl/free_ops.hpp"
#include "cvcl/grid.hpp"
#include "cvcl/measures.hpp"
#include "cvcl/output.hpp"
#include "cvcl/state.hpp"
#include "cvcl/witness.hpp"
