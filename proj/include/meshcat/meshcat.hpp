#pragma once

// Umbrella header.

#include "meshcat/covering.hpp"
#include "meshcat/dsl.hpp"
#include "meshcat/error.hpp"
#include "meshcat/field.hpp"
#include "meshcat/groebner.hpp"
#include "meshcat/homotopy.hpp"
#include "meshcat/lincomb.hpp"
#include "meshcat/mesh.hpp"
#include "meshcat/order.hpp"
#include "meshcat/quiver.hpp"
#include "meshcat/span.hpp"
