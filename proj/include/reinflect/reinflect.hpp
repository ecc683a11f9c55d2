// Copyright 2026 The Reinflect Authors. All Rights Reserved.
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

#include "reinflect/context_pipeline.hpp"
#include "reinflect/data_model.hpp"
#include "reinflect/error.hpp"
#include "reinflect/evaluator.hpp"
#include "reinflect/report.hpp"
#include "reinflect/rule_engine.hpp"
#include "reinflect/sampler.hpp"
#include "reinflect/utf8.hpp"
