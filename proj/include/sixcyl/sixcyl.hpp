#pragma once

/**
 * @file sixcyl.hpp
 * @brief Umbrella header for the library (everything except the CLI).
 */

#include "sixcyl/calculus.hpp"
#include "sixcyl/certificate.hpp"
#include "sixcyl/configuration.hpp"
#include "sixcyl/error.hpp"
#include "sixcyl/galois.hpp"
#include "sixcyl/geometry.hpp"
#include "sixcyl/quad_ext.hpp"
#include "sixcyl/version.hpp"
