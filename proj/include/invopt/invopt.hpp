// Copyright (c) 2026 invopt contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include "invopt/cli.hpp"
#include "invopt/document.hpp"
#include "invopt/forward.hpp"
#include "invopt/instances.hpp"
#include "invopt/inverse.hpp"
#include "invopt/kernel.hpp"
#include "invopt/kes.hpp"
#include "invopt/linear_inverse.hpp"
#include "invopt/linprog.hpp"
#include "invopt/model.hpp"
#include "invopt/report.hpp"
#include "invopt/types.hpp"
