#pragma once

#include "scbell/qmat.hpp"
#include "scbell/random.hpp"
#include "scbell/sc_states.hpp"
#include "scbell/bell.hpp"
#include "scbell/maximizer.hpp"
#include "scbell/entanglement.hpp"
#include "scbell/channels.hpp"
#include "scbell/verify.hpp"
