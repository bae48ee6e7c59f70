#pragma once

#include "ame/catalog.hpp"
#include "ame/code.hpp"
#include "ame/errors.hpp"
#include "ame/existence.hpp"
#include "ame/field.hpp"
#include "ame/pauli.hpp"
#include "ame/reduction.hpp"
#include "ame/repeater.hpp"
#include "ame/stabtab.hpp"
#include "ame/state_oracle.hpp"
#include "ame/zp_matrix.hpp"
