#pragma once

#include "topography/errors.hpp"
#include "topography/exact.hpp"
#include "topography/scalar.hpp"
#include "topography/laurent.hpp"
#include "topography/master.hpp"
#include "topography/topograph.hpp"
#include "topography/snake.hpp"
#include "topography/forms.hpp"
#include "topography/painleve.hpp"
