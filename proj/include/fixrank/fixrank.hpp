#pragma once

#include "fixrank/field.hpp"
#include "fixrank/poly.hpp"
#include "fixrank/homog.hpp"
#include "fixrank/matrix.hpp"
#include "fixrank/polymatrix.hpp"
#include "fixrank/pencil.hpp"
#include "fixrank/structure.hpp"
#include "fixrank/synth_blocks.hpp"
#include "fixrank/synth.hpp"
#include "fixrank/placement.hpp"
#include "fixrank/oracle.hpp"
