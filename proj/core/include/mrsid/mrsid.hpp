// Copyright 2026 The mrsid Authors.
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

#include "mrsid/data_archive.hpp"
#include "mrsid/errors.hpp"
#include "mrsid/identifiability.hpp"
#include "mrsid/linalg.hpp"
#include "mrsid/lti_model.hpp"
#include "mrsid/moesp.hpp"
#include "mrsid/rng.hpp"
#include "mrsid/serialization.hpp"
#include "mrsid/synth.hpp"
#include "mrsid/validation.hpp"
