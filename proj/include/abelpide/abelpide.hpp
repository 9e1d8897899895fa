#pragma once

#include "abelpide/config.hpp"
#include "abelpide/csv.hpp"
#include "abelpide/errors.hpp"
#include "abelpide/experiments.hpp"
#include "abelpide/exponent.hpp"
#include "abelpide/fem.hpp"
#include "abelpide/kernel.hpp"
#include "abelpide/memory.hpp"
#include "abelpide/model.hpp"
#include "abelpide/quadrature.hpp"
#include "abelpide/special.hpp"
#include "abelpide/stepper.hpp"
