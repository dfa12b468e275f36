#pragma once

// Everything in one include.

#include "hrpair/scalar.hpp"
#include "hrpair/upoly.hpp"
#include "hrpair/partition.hpp"
#include "hrpair/sympoly.hpp"
#include "hrpair/chern.hpp"
#include "hrpair/linalg.hpp"
#include "hrpair/verdict.hpp"
#include "hrpair/form.hpp"
#include "hrpair/ring.hpp"
#include "hrpair/hrcheck.hpp"
#include "hrpair/bogomolov.hpp"
#include "hrpair/known_examples.hpp"
#include "hrpair/ring_spec.hpp"
