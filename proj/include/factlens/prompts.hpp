#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "factlens/entity_index.hpp"
#include "factlens/factgate.hpp"

namespace factlens {

enum class Role { System, User, Assistant };

std::string to_string(Role role);

struct Message {
  Role role = Role::User;
  std::string content;
};

struct PromptMessages {
  std::vector<Message> messages;
};

enum class EvalMode { Instruction, InstructionOneShot };
enum class ScoreSchema { Scale5, Percent };

// Instruction -> Scale5, InstructionOneShot -> Percent.
ScoreSchema default_schema(EvalMode mode);

// Truncation limits applied before rendering. Oversized inputs are cut
// at the limit and marked with a trailing " [truncated]".
inline constexpr std::size_t kMaxDescriptionChars = 1500;
inline constexpr std::size_t kMaxArticleChars = 12000;

std::string truncate_for_prompt(std::string_view text, std::size_t limit);

// System message establishing the financial-analyst persona, then one
// user message naming the entity, giving its description, and asking
// for the impact summary of the fact.
PromptMessages render_impact_prompt(const FactStatement& fact, const Entity& entity);

struct ImpactSummary;

// User message carrying every per-entity summary and asking for one
// article-level summary that lists every impacted company.
PromptMessages render_aggregation_prompt(const std::string& article_id,
                                         const std::vector<ImpactSummary>& summaries);

// Judge prompt for scoring a summary against its source article.
// The one-shot mode prepends worked exemplars; the metric block is
// chosen by `schema` (defaults to the mode's schema).
PromptMessages render_eval_prompt(std::string_view article, std::string_view summary,
                                  EvalMode mode);
PromptMessages render_eval_prompt(std::string_view article, std::string_view summary,
                                  EvalMode mode, ScoreSchema schema);

// Plain-text form used by the CLI and tests: one "--- <role> ---"
// header per message followed by its content.
std::string render_as_text(const PromptMessages& prompt);

}  // namespace factlens
