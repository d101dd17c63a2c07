// Copyright 2026 The Modal Bandits Authors
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

#include "modal_bandits/bandit.hpp"
#include "modal_bandits/conditional_modes.hpp"
#include "modal_bandits/contextual.hpp"
#include "modal_bandits/environments.hpp"
#include "modal_bandits/errors.hpp"
#include "modal_bandits/knn.hpp"
#include "modal_bandits/mode_estimation.hpp"
#include "modal_bandits/random.hpp"
#include "modal_bandits/sample_set.hpp"
#include "modal_bandits/score.hpp"
#include "modal_bandits/zooming.hpp"
