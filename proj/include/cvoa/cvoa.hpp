#pragma once

/// @file cvoa.hpp
/// @brief Umbrella header for the coronavirus optimization library.
///
/// The engine (strain.hpp, multi_strain.hpp) is generic over any type that
/// models the Codec concept; binary.hpp and net.hpp provide the two bundled
/// codifications.

#include <cvoa/core/codec.hpp>
#include <cvoa/core/parameters.hpp>
#include <cvoa/core/random.hpp>

#include <cvoa/engine/ledger.hpp>
#include <cvoa/engine/multi_strain.hpp>
#include <cvoa/engine/strain.hpp>

#include <cvoa/codecs/binary.hpp>
#include <cvoa/codecs/external_evaluator.hpp>
#include <cvoa/codecs/net.hpp>
