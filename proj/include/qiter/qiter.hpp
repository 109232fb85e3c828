// Copyright 2026 The qiter Authors
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

#include "qiter/classical.hpp"
#include "qiter/error.hpp"
#include "qiter/generate.hpp"
#include "qiter/harness.hpp"
#include "qiter/io.hpp"
#include "qiter/lcu.hpp"
#include "qiter/linalg.hpp"
#include "qiter/oracles.hpp"
#include "qiter/problem.hpp"
#include "qiter/qcd.hpp"
#include "qiter/qkaczmarz.hpp"
#include "qiter/readout.hpp"
#include "qiter/simstate.hpp"
#include "qiter/trace.hpp"
#include "qiter/verify.hpp"
