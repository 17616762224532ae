#pragma once

#include <stdexcept>
#include <string>

namespace arithbf {

// Input fails a structural precondition detected during validation.
struct NonEquivariantPairing : std::runtime_error {
  explicit NonEquivariantPairing(const std::string& w) : std::runtime_error(w) {}
};

// Preimage under an injection requested for an element outside its image.
struct LiftOutsideKernel : std::runtime_error {
  explicit LiftOutsideKernel(const std::string& w) : std::runtime_error(w) {}
};

// A chain expected to be closed has nonzero differential.
struct NotACocycle : std::runtime_error {
  explicit NotACocycle(const std::string& w) : std::runtime_error(w) {}
};

// A local pairing expected to identify a group with its dual fails to.
struct DualityNotPerfect : std::runtime_error {
  explicit DualityNotPerfect(const std::string& w) : std::runtime_error(w) {}
};

// The degree-three obstruction class of a field pair does not vanish.
struct ObstructionNonzero : std::runtime_error {
  explicit ObstructionNonzero(const std::string& w) : std::runtime_error(w) {}
};

// No local cochain with the required boundary exists.
struct NoLocalLift : std::runtime_error {
  explicit NoLocalLift(const std::string& w) : std::runtime_error(w) {}
};

// Two computations of the same torsor point disagree.
struct FiberMismatch : std::runtime_error {
  explicit FiberMismatch(const std::string& w) : std::runtime_error(w) {}
};

// A set-theoretic section fails its defining identity.
struct SectionMismatch : std::runtime_error {
  explicit SectionMismatch(const std::string& w) : std::runtime_error(w) {}
};

// Exact rational bookkeeping produced incompatible denominators.
struct DenominatorMismatch : std::runtime_error {
  explicit DenominatorMismatch(const std::string& w) : std::runtime_error(w) {}
};

}  // namespace arithbf
