#pragma once

#include "apps.hpp"
#include "core.hpp"
#include "diagnostics.hpp"
#include "engine.hpp"
#include "fourier.hpp"
#include "io.hpp"
#include "matrix.hpp"
#include "phase.hpp"
#include "registry.hpp"
#include "runner.hpp"
#include "sets.hpp"
