/// @file errors.h
/// @brief Error types thrown across the pipeline.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sap {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file content. Line-oriented formats attach the 1-based
/// line number; structured formats leave it 0 and point at the offending
/// field in the message instead.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Argument outside its mathematical domain (non-positive frequency, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Too few retained samples to support an estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Mixture fitting failure.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Requested component count exceeds what the histogram supports.
class InfeasibleKError : public FitError {
 public:
  using FitError::FitError;
};

/// Log-likelihood became non-finite during fitting.
class FitDivergedError : public FitError {
 public:
  using FitError::FitError;
};

/// Filesystem-level failure. Message names the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Song-level failure in corpus processing. Carries the song id.
class SongError : public Error {
 public:
  SongError(std::string song_id, const std::string& what)
      : Error("song '" + song_id + "': " + what), song_id_(std::move(song_id)) {}
  const std::string& song_id() const { return song_id_; }

 private:
  std::string song_id_;
};

}  // namespace sap
