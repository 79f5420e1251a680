#pragma once

#include "singmod/cm/class_group.hpp"
#include "singmod/cm/hilbert.hpp"
#include "singmod/cm/singular_moduli.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/core/rng.hpp"
#include "singmod/experiments/prop12.hpp"
#include "singmod/experiments/report.hpp"
#include "singmod/experiments/rigidity_scan.hpp"
#include "singmod/experiments/selftest.hpp"
#include "singmod/experiments/sieve_run.hpp"
#include "singmod/experiments/suites.hpp"
#include "singmod/experiments/warmup.hpp"
#include "singmod/galois/conjugator.hpp"
#include "singmod/modular/distance.hpp"
#include "singmod/modular/hecke.hpp"
#include "singmod/modular/modpoly.hpp"
#include "singmod/modular/rigidity.hpp"
#include "singmod/padic/analysis.hpp"
#include "singmod/padic/number.hpp"
#include "singmod/padic/polynomial.hpp"
#include "singmod/padic/roots.hpp"
#include "singmod/quaternion/order.hpp"
#include "singmod/sieve/squarefree.hpp"
