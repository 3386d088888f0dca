#pragma once

#include "yamabe/bubble.hpp"
#include "yamabe/corrections.hpp"
#include "yamabe/exact.hpp"
#include "yamabe/expansions.hpp"
#include "yamabe/linsolve.hpp"
#include "yamabe/pohozaev.hpp"
#include "yamabe/profiles.hpp"
#include "yamabe/quadrature.hpp"
#include "yamabe/rational.hpp"
#include "yamabe/tensors.hpp"
