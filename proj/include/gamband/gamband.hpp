#pragma once

#include "gamband/design.hpp"
#include "gamband/errors.hpp"
#include "gamband/experiment.hpp"
#include "gamband/harness.hpp"
#include "gamband/io.hpp"
#include "gamband/linalg.hpp"
#include "gamband/linucb.hpp"
#include "gamband/model.hpp"
#include "gamband/phased_elim.hpp"
#include "gamband/rng.hpp"
