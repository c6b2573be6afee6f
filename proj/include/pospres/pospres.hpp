#pragma once

#include "pospres/const_group.hpp"
#include "pospres/diagonal.hpp"
#include "pospres/diff_operator.hpp"
#include "pospres/errors.hpp"
#include "pospres/expm.hpp"
#include "pospres/exponent.hpp"
#include "pospres/finite_rank.hpp"
#include "pospres/levy.hpp"
#include "pospres/linear_span.hpp"
#include "pospres/membership.hpp"
#include "pospres/moment.hpp"
#include "pospres/parallel.hpp"
#include "pospres/polynomial.hpp"
#include "pospres/rational.hpp"
