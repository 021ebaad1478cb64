/*
Copyright 2026, the didea contributors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef DIDEA_ERROR_H
#define DIDEA_ERROR_H

#include <stdexcept>
#include <string>

namespace didea {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input violates an operation's precondition (unknown residue, empty list...).
class InvalidInput : public Error {
public:
  using Error::Error;
};

// Malformed file contents. The message carries file/line or scan context.
class ParseError : public Error {
public:
  using Error::Error;
};

// Inconsistent or out-of-range configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace didea

#endif
