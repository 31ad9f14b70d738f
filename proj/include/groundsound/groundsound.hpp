/**
 * @file groundsound.hpp
 * @brief Everything: materials, Lamb solution, regularized response, contact,
 *        radiation, sweeps and the wavesolver.
 */

#ifndef GROUNDSOUND_GROUNDSOUND_HPP
#define GROUNDSOUND_GROUNDSOUND_HPP

#include "groundsound/branch_scan.hpp"
#include "groundsound/contact.hpp"
#include "groundsound/errors.hpp"
#include "groundsound/fdtd.hpp"
#include "groundsound/lamb.hpp"
#include "groundsound/material.hpp"
#include "groundsound/oracle.hpp"
#include "groundsound/radiation.hpp"
#include "groundsound/regularized.hpp"
#include "groundsound/scenario.hpp"
#include "groundsound/sweeps.hpp"
#include "groundsound/trace.hpp"

#endif
