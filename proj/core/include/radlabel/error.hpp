#pragma once

#include <stdexcept>
#include <string>

namespace radlabel {

// Malformed or inconsistent input data: bad records, unknown ids, failed
// validation. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A lookup (session, keyword, report) referenced something that does not
// exist. The review service maps this to HTTP 404.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace radlabel
