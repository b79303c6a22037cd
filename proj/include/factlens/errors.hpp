#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace factlens {

// Base for all library errors. `code()` is a stable machine-readable
// identifier; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define FACTLENS_ERROR(NAME, CODE)                        \
  class NAME : public Error {                             \
   public:                                                \
    explicit NAME(const std::string& detail)              \
        : Error(CODE, std::string(CODE) + ": " + detail) {} \
  }

// ingest
FACTLENS_ERROR(EmptyArticleError, "EmptyArticle");

// factgate
FACTLENS_ERROR(BadLexiconError, "BadLexicon");

// entity_index
FACTLENS_ERROR(DuplicateEntityIdError, "DuplicateEntityId");
FACTLENS_ERROR(ProviderError, "ProviderError");
FACTLENS_ERROR(FingerprintMismatchError, "FingerprintMismatch");
FACTLENS_ERROR(BadEntityError, "BadEntity");
FACTLENS_ERROR(BadIndexFileError, "BadIndexFile");

// embedding
FACTLENS_ERROR(EmptyTextError, "EmptyText");
FACTLENS_ERROR(ZeroVectorError, "ZeroVector");
FACTLENS_ERROR(BadDimensionError, "BadDimension");

// llm_gateway
FACTLENS_ERROR(BackendError, "BackendError");
FACTLENS_ERROR(TransientBackendError, "TransientBackendError");
FACTLENS_ERROR(CacheIOError, "CacheIOError");

// summarizer
FACTLENS_ERROR(NoSummariesError, "NoSummaries");
FACTLENS_ERROR(PipelineStageError, "PipelineStage");

// evaluator
FACTLENS_ERROR(MissingMetricError, "MissingMetric");
FACTLENS_ERROR(OutOfRangeError, "OutOfRange");
FACTLENS_ERROR(MixedSchemaError, "MixedSchema");
FACTLENS_ERROR(EmptyInputError, "EmptyInput");
FACTLENS_ERROR(RankMismatchError, "RankMismatch");
FACTLENS_ERROR(BadNError, "BadN");

// config / io
FACTLENS_ERROR(BadConfigError, "BadConfig");
FACTLENS_ERROR(IOError, "IO");
FACTLENS_ERROR(BadRecordError, "BadRecord");

#undef FACTLENS_ERROR

}  // namespace factlens
