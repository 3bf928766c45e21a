#pragma once

#include "mucalc/formula.hpp"
#include "mucalc/lts.hpp"
#include "mucalc/semantics.hpp"
#include "mucalc/names.hpp"
#include "mucalc/sequent.hpp"
#include "mucalc/tableau.hpp"
#include "mucalc/proof_io.hpp"
#include "mucalc/countermodel.hpp"
