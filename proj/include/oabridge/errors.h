// oabridge/errors.h

// Copyright 2026 The oabridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef OABRIDGE_ERRORS_H_
#define OABRIDGE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace oabridge {

// Base of every error the library throws. The CLI maps these to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error { using Error::Error; };

// WAV decoding.
class WavFormatError : public Error { using Error::Error; };
class UnsupportedEncodingError : public Error { using Error::Error; };
class ChannelCountError : public Error { using Error::Error; };
class SampleRateError : public Error { using Error::Error; };
class NonFiniteSampleError : public Error { using Error::Error; };

// Shapes, lengths and argument contracts.
class InvalidArgumentError : public Error { using Error::Error; };
class ShapeMismatchError : public Error { using Error::Error; };
class LengthMismatchError : public Error { using Error::Error; };
class SignalTooShortError : public Error { using Error::Error; };
class EmptyInputError : public Error { using Error::Error; };

// Model files.
class ModelVersionError : public Error { using Error::Error; };
class ModelSchemaError : public Error { using Error::Error; };
class ModelValidationError : public Error { using Error::Error; };

// Manifests.
class ManifestError : public Error { using Error::Error; };
class ReportSchemaError : public Error { using Error::Error; };

// External SE/ASR adapters. `diagnostics` carries whatever the child wrote.
class AdapterError : public Error {
 public:
  AdapterError(const std::string &what, std::string diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string &diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

class AdapterTimeoutError : public AdapterError {
  using AdapterError::AdapterError;
};

}  // namespace oabridge

#endif  // OABRIDGE_ERRORS_H_
