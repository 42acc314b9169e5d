// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sfcm {

// Base class for all library errors. Concrete subclasses exist so callers
// can catch a specific failure kind; messages carry the offending
// tag/line/index where applicable.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SFCM_DEFINE_ERROR(NAME)                                  \
  class NAME : public Error {                                    \
   public:                                                       \
    explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {} \
  }

// structure_io
SFCM_DEFINE_ERROR(MissingCellParameter);
SFCM_DEFINE_ERROR(MissingAtomLoop);
SFCM_DEFINE_ERROR(UnknownElement);
SFCM_DEFINE_ERROR(MalformedNumber);
SFCM_DEFINE_ERROR(InvalidLattice);
SFCM_DEFINE_ERROR(HeaderMismatch);
SFCM_DEFINE_ERROR(NonNumericField);
SFCM_DEFINE_ERROR(DuplicateId);

// descriptors
SFCM_DEFINE_ERROR(CoincidentAtoms);

// morton
SFCM_DEFINE_ERROR(IndexOutOfRange);

// lsi
SFCM_DEFINE_ERROR(EmptyDataset);
SFCM_DEFINE_ERROR(LengthMismatch);
SFCM_DEFINE_ERROR(KTooLarge);
SFCM_DEFINE_ERROR(ConvergenceFailure);
SFCM_DEFINE_ERROR(TooFewValues);

// mlp
SFCM_DEFINE_ERROR(DimensionMismatch);
SFCM_DEFINE_ERROR(NonFiniteLoss);

// eval
SFCM_DEFINE_ERROR(NearZeroReference);
SFCM_DEFINE_ERROR(TooFewSamples);
SFCM_DEFINE_ERROR(MissingTargets);

// cli
SFCM_DEFINE_ERROR(NoValidStructures);
SFCM_DEFINE_ERROR(InvalidConfig);

#undef SFCM_DEFINE_ERROR

}  // namespace sfcm
