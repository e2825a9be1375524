#pragma once

#include "extrans/error.hpp"
#include "extrans/text.hpp"
#include "extrans/lingua.hpp"
#include "extrans/logform.hpp"
#include "extrans/prover.hpp"
#include "extrans/store.hpp"
#include "extrans/rank.hpp"
#include "extrans/engine.hpp"
