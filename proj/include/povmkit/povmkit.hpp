#pragma once

// Umbrella header for the POVM uncertainty toolkit.

#include "povmkit/catalog.hpp"
#include "povmkit/complex_matrix.hpp"
#include "povmkit/entropy.hpp"
#include "povmkit/errors.hpp"
#include "povmkit/json_io.hpp"
#include "povmkit/naimark.hpp"
#include "povmkit/optimize.hpp"
#include "povmkit/povm.hpp"
#include "povmkit/qubit.hpp"
#include "povmkit/qubit_joint.hpp"
#include "povmkit/random.hpp"
#include "povmkit/scan.hpp"
#include "povmkit/uncertainty.hpp"
#include "povmkit/version.hpp"
