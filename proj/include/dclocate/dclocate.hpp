#ifndef DCLOCATE_DCLOCATE_HPP
#define DCLOCATE_DCLOCATE_HPP

#include "dclocate/convex_sets.hpp"
#include "dclocate/dca.hpp"
#include "dclocate/errors.hpp"
#include "dclocate/fermat_torricelli.hpp"
#include "dclocate/gauge.hpp"
#include "dclocate/io.hpp"
#include "dclocate/multifacility.hpp"
#include "dclocate/rng.hpp"
#include "dclocate/run.hpp"
#include "dclocate/set_clustering.hpp"

#endif  // DCLOCATE_DCLOCATE_HPP
