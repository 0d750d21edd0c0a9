#pragma once

#include <stdexcept>

#include "twinrank/faults/fault_spec.hpp"

namespace twinrank::faults {

class Unsupported : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Effect, detection stage, recovery checkpoint and restart count of a
/// matmul fault, from the program's data flow alone:
///  - the datum is sent before being overwritten: TDC at that send;
///  - it is overwritten (or never used) first: LE;
///  - it is a kept result checked at the end: FSC at VALIDATE;
///  - it feeds MATMUL rows still to be computed: the Worker's C carries it
///    to GATHER (TDC);
///  - the loop index is reset mid-MATMUL: TOE at the next rendezvous.
/// Recovery restarts from the latest checkpoint before the injection, after
/// one restart per checkpoint taken between injection and detection plus
/// the successful one. Throws Unsupported for data outside that model.
ScenarioPrediction predict(const FaultSpec& spec);

}  // namespace twinrank::faults
