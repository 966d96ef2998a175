#pragma once

// Umbrella header: pulls in the full toolkit.

#include "channels.hpp"
#include "complex_matrix.hpp"
#include "entanglement.hpp"
#include "hermitian_eig.hpp"
#include "metrology.hpp"
#include "nmr.hpp"
#include "optimize.hpp"
#include "parallel.hpp"
#include "pauli.hpp"
#include "quantum.hpp"
#include "rng.hpp"
#include "serialize.hpp"
#include "states.hpp"
