/*
 * Copyright 2026 The ghzsim Authors
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

// Umbrella header.

#include "ghzsim/config.hpp"
#include "ghzsim/detection.hpp"
#include "ghzsim/error.hpp"
#include "ghzsim/ghz_experiments.hpp"
#include "ghzsim/io.hpp"
#include "ghzsim/mode_algebra.hpp"
#include "ghzsim/optical_elements.hpp"
#include "ghzsim/permanent.hpp"
#include "ghzsim/photon_sources.hpp"
#include "ghzsim/random.hpp"
#include "ghzsim/rate_engine.hpp"
#include "ghzsim/runner.hpp"
