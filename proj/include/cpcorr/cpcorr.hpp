/*
 * Copyright 2026 The cpcorr authors
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

#ifndef CPCORR_CPCORR_HPP
#define CPCORR_CPCORR_HPP

#include "cpcorr/asymptotics.hpp"
#include "cpcorr/correlators.hpp"
#include "cpcorr/ensembles.hpp"
#include "cpcorr/errors.hpp"
#include "cpcorr/linalg.hpp"
#include "cpcorr/logdomain.hpp"
#include "cpcorr/matrix.hpp"
#include "cpcorr/measures.hpp"
#include "cpcorr/montecarlo.hpp"
#include "cpcorr/partition.hpp"
#include "cpcorr/quadrature.hpp"
#include "cpcorr/rng.hpp"
#include "cpcorr/special.hpp"
#include "cpcorr/symfunc.hpp"
#include "cpcorr/verify.hpp"

#endif
