#pragma once

// Umbrella header.

#include "hvseq/data_io.hpp"
#include "hvseq/encoder.hpp"
#include "hvseq/eval.hpp"
#include "hvseq/oracle.hpp"
#include "hvseq/partial_perm.hpp"
#include "hvseq/permutation.hpp"
#include "hvseq/rng.hpp"
#include "hvseq/similarity.hpp"
#include "hvseq/sparse_hv.hpp"
#include "hvseq/symbolic.hpp"
#include "hvseq/text.hpp"
