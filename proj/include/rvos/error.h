/* Copyright 2026 The rvos Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef RVOS_ERROR_H_
#define RVOS_ERROR_H_

#include <stdexcept>
#include <string>

namespace rvos {

// Every failure raised by the library derives from Error. The concrete type
// names the failure category so callers can react to it without parsing
// messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RVOS_DEFINE_ERROR(Name)     \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  };

// Two operands disagree on width/height.
RVOS_DEFINE_ERROR(ShapeError)
// A threshold, ratio or config field is out of range.
RVOS_DEFINE_ERROR(ConfigError)
// A document could not be parsed.
RVOS_DEFINE_ERROR(ParseError)
// A document parsed but lacks a required field or has the wrong type.
RVOS_DEFINE_ERROR(SchemaError)
RVOS_DEFINE_ERROR(DecodeError)
RVOS_DEFINE_ERROR(WriteError)
// Sequences or frame lists that must agree do not.
RVOS_DEFINE_ERROR(ConsistencyError)
RVOS_DEFINE_ERROR(InputError)
// An external backend exited nonzero or timed out.
RVOS_DEFINE_ERROR(BackendError)
// A backend finished but its response breaks the exchange contract.
RVOS_DEFINE_ERROR(ProtocolError)
RVOS_DEFINE_ERROR(EvaluationError)
RVOS_DEFINE_ERROR(RenderError)

#undef RVOS_DEFINE_ERROR

}  // namespace rvos

#endif  // RVOS_ERROR_H_
