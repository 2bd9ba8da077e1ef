#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace reviewaudit {

// Base class for every typed failure the library throws. `kind()` is the
// stable machine-readable name that also shows up in reports and exit paths.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

// --- pdf ---
struct MalformedPdf : Error {
  explicit MalformedPdf(const std::string& m) : Error("MalformedPdf", m) {}
};
struct EncryptedPdf : Error {
  explicit EncryptedPdf(const std::string& m) : Error("EncryptedPdf", m) {}
};
struct PayloadEncodingError : Error {
  explicit PayloadEncodingError(const std::string& m) : Error("PayloadEncodingError", m) {}
};
struct SectionNotFound : Error {
  explicit SectionNotFound(const std::string& m) : Error("SectionNotFound", m) {}
};

// --- llm client ---
struct BackendUnavailable : Error {
  explicit BackendUnavailable(const std::string& m) : Error("BackendUnavailable", m) {}
};
struct QuotaExceeded : Error {
  explicit QuotaExceeded(const std::string& m) : Error("QuotaExceeded", m) {}
};
struct OfflineMiss : Error {
  explicit OfflineMiss(const std::string& m) : Error("OfflineMiss", m) {}
};

// --- review parsing ---
struct MalformedReview : Error {
  MalformedReview(const std::string& m, std::string raw_response)
      : Error("MalformedReview", m), raw(std::move(raw_response)) {}
  std::string raw;  // verbatim backend text, preserved for diagnostics
};

// --- key points ---
struct MalformedSummary : Error {
  explicit MalformedSummary(const std::string& m) : Error("MalformedSummary", m) {}
};
struct MalformedMatch : Error {
  explicit MalformedMatch(const std::string& m) : Error("MalformedMatch", m) {}
};
struct EmptyDenominator : Error {
  explicit EmptyDenominator(const std::string& m) : Error("EmptyDenominator", m) {}
};

// --- ratings ---
struct PatternNotFound : Error {
  explicit PatternNotFound(const std::string& m) : Error("PatternNotFound", m) {}
};
struct OutOfRange : Error {
  explicit OutOfRange(const std::string& m) : Error("OutOfRange", m) {}
};
struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& m) : Error("LengthMismatch", m) {}
};
struct NoPairs : Error {
  explicit NoPairs(const std::string& m) : Error("NoPairs", m) {}
};

// --- ranking simulation ---
struct RecordWithoutRatings : Error {
  explicit RecordWithoutRatings(const std::string& m) : Error("RecordWithoutRatings", m) {}
};
struct MissingLlmRating : Error {
  explicit MissingLlmRating(const std::string& m) : Error("MissingLlmRating", m) {}
};
struct IdSetMismatch : Error {
  explicit IdSetMismatch(const std::string& m) : Error("IdSetMismatch", m) {}
};

// --- statistics ---
struct DegenerateInput : Error {
  explicit DegenerateInput(const std::string& m) : Error("DegenerateInput", m) {}
};
struct InsufficientData : Error {
  explicit InsufficientData(const std::string& m) : Error("InsufficientData", m) {}
};

// --- shared ---
struct EmptyInput : Error {
  explicit EmptyInput(const std::string& m) : Error("EmptyInput", m) {}
};

// --- manifest runner ---
struct InvalidManifest : Error {
  explicit InvalidManifest(const std::string& m) : Error("InvalidManifest", m) {}
};
struct CorpusReadError : Error {
  explicit CorpusReadError(const std::string& m) : Error("CorpusReadError", m) {}
};

}  // namespace reviewaudit
