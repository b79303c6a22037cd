#include "factlens/prompts.hpp"

#include <utility>

#include "factlens/summarizer.hpp"

namespace factlens {

namespace {

constexpr const char* kAnalystSystem =
    "Imagine that you are an expert financial analyst and you are analyzing the impact "
    "of a certain news article on different stocks and companies.";

constexpr const char* kJudgeInstructions =
    "You will be given one summary written for a news article. Your task is to rate the "
    "summary on one metric. Please make sure you read and understand these instructions "
    "carefully. Please keep this document open while reviewing, and refer to it as "
    "needed.\n"
    "\n"
    "Evaluation Criteria:\n"
    "\n"
    "- Coherence (1-5) - the collective quality of all sentences. We align this "
    "dimension with the DUC quality question of structure and coherence whereby \"the "
    "summary should be well-structured and well-organized. The summary should not just "
    "be a heap of related information, but should build from sentence to sentence to a "
    "coherent body of information about a topic.\"\n"
    "\n"
    "Evaluation Steps:\n"
    "\n"
    "- Read the news article carefully and identify the main topic and key points.\n"
    "- Read the summary and compare it to the news article. Check if the summary covers "
    "the main topic and key points of the news article and if it presents them in a "
    "clear and logical order.\n"
    "- Assign a score for coherence on a scale of 1 to 5, where 1 is the lowest and 5 "
    "is the highest based on the Evaluation Criteria.";

constexpr const char* kFewShotExemplars =
    "Few Shot Prompt\n"
    "\n"
    "Input:\n"
    "\n"
    "The quick brown fox jumps over the lazy dog.\n"
    "\n"
    "Output:\n"
    "\n"
    "The fox jumps over the dog.\n"
    "\n"
    "Evaluation:\n"
    "\n"
    "Accuracy: 100% Conciseness: 100% Fluency: 100% Engagement: 100%\n"
    "\n"
    "Input:\n"
    "\n"
    "The quick brown fox jumps over the lazy dog. The dog barks at the fox. The fox "
    "runs away.\n"
    "\n"
    "Output:\n"
    "\n"
    "The fox jumps over the dog, which barks at it. The fox runs away.\n"
    "\n"
    "Evaluation:\n"
    "\n"
    "Accuracy: 100% Conciseness: 80% Fluency: 100% Engagement: 100%\n"
    "\n"
    "Input:\n"
    "\n"
    "The quick brown fox jumps over the lazy dog. The dog barks at the fox. The fox "
    "runs away. The dog chases the fox. The fox hides in a hole. The dog looks for the "
    "fox, but cannot find it. The dog gives up and goes home.\n"
    "\n"
    "Output:\n"
    "\n"
    "The fox jumps over the dog, which barks at it. The fox runs away, but the dog "
    "chases it. The fox hides in a hole, and the dog looks for it, but cannot find it. "
    "The dog gives up and goes home.\n"
    "\n"
    "Evaluation:\n"
    "\n"
    "Accuracy: 100% Conciseness: 70% Fluency: 100% Engagement: 100%";

constexpr const char* kScale5Tail =
    "Rate the summary on each of the following metrics, from 1 (lowest) to 5 "
    "(highest): Factfulness, Conciseness, Usefulness. Respond with one line per metric "
    "in the form \"Metric: score\".";

constexpr const char* kPercentTail =
    "Rate the summary on each of the following metrics as a percentage from 0% to "
    "100%: Accuracy, Conciseness, Fluency, Engagement. Respond with one line per "
    "metric in the form \"Metric: score%\".";

}  // namespace

std::string to_string(Role role) {
  switch (role) {
    case Role::System:
      return "system";
    case Role::User:
      return "user";
    case Role::Assistant:
      return "assistant";
  }
  return "user";
}

ScoreSchema default_schema(EvalMode mode) {
  return mode == EvalMode::Instruction ? ScoreSchema::Scale5 : ScoreSchema::Percent;
}

std::string truncate_for_prompt(std::string_view text, std::size_t limit) {
  if (text.size() <= limit) {
    return std::string(text);
  }
  std::string out(text.substr(0, limit));
  out += " [truncated]";
  return out;
}

PromptMessages render_impact_prompt(const FactStatement& fact, const Entity& entity) {
  std::string user = "Consider the company " + entity.name + ", which is described as " +
                     truncate_for_prompt(entity.description, kMaxDescriptionChars) + ".";
  user += "\n\nThe news article contains the following factual statement: " + fact.text;
  user +=
      "\n\nProvide a brief summary of the potential impact of this news on the company.";
  PromptMessages prompt;
  prompt.messages.push_back({Role::System, kAnalystSystem});
  prompt.messages.push_back({Role::User, std::move(user)});
  return prompt;
}

PromptMessages render_aggregation_prompt(const std::string& article_id,
                                         const std::vector<ImpactSummary>& summaries) {
  if (summaries.empty()) {
    throw NoSummariesError("cannot aggregate zero impact summaries");
  }
  std::string user =
      "Below are the impact summaries generated for news article \"" + article_id + "\".";
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    user += "\n\nSummary " + std::to_string(i + 1) + ": " + summaries[i].text;
  }
  user +=
      "\n\nProvide a concise summary that captures the most important information from "
      "the article. The summary should include key details such as the main topic, the "
      "impact on every relevant company, relevant facts and figures, and any important "
      "conclusions or recommendations presented in the text. Also list every company "
      "that has been impacted by the news.";
  PromptMessages prompt;
  prompt.messages.push_back({Role::System, kAnalystSystem});
  prompt.messages.push_back({Role::User, std::move(user)});
  return prompt;
}

PromptMessages render_eval_prompt(std::string_view article, std::string_view summary,
                                  EvalMode mode) {
  return render_eval_prompt(article, summary, mode, default_schema(mode));
}

PromptMessages render_eval_prompt(std::string_view article, std::string_view summary,
                                  EvalMode mode, ScoreSchema schema) {
  std::string user;
  if (mode == EvalMode::InstructionOneShot) {
    user += kFewShotExemplars;
    user += "\n\n";
  }
  user += kJudgeInstructions;
  user += "\n\nNews Article:\n\n";
  user += truncate_for_prompt(article, kMaxArticleChars);
  user += "\n\nSummary:\n\n";
  user += truncate_for_prompt(summary, kMaxArticleChars);
  user += "\n\n";
  user += schema == ScoreSchema::Scale5 ? kScale5Tail : kPercentTail;
  PromptMessages prompt;
  prompt.messages.push_back({Role::User, std::move(user)});
  return prompt;
}

std::string render_as_text(const PromptMessages& prompt) {
  std::string out;
  for (const Message& m : prompt.messages) {
    out += "--- " + to_string(m.role) + " ---\n";
    out += m.content;
    out += "\n\n";
  }
  if (!out.empty()) {
    out.resize(out.size() - 1);  // single trailing newline
  }
  return out;
}

}  // namespace factlens
