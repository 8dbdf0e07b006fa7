#pragma once

#include <map>
#include <string>
#include <string_view>

#include "ideation/llm_gateway.hpp"

namespace ideation {

/// Prompt templates for every stage. Placeholders are `{name}`; each
/// template must contain the placeholders its stage substitutes (see
/// `validate`). Sections wrapped in `[[NAME]] ... [[/NAME]]` delimit payloads
/// so replies and scripts can refer to them.
struct PromptBundle {
  std::string persona;             // system prompt: {agent}, {profile}
  std::string topic_prompt;        // {history}
  std::string topic_score_prompt;  // {proposals}, {format}
  std::string generation_prompt;   // {topic}, {previous_idea}
  std::string revision_prompt;     // {idea}
  std::string synthesis_prompt;    // {idea}, {revisions}
  std::string reflection_prompt;   // {idea}, {synthesis}
  std::string review_prompt;       // {ideas}, {references}, {format}
  std::string judge_prompt;        // {ideas}, {references}, {format}
  std::string abstract_prompt;     // {idea}
  std::string refine_prompt;       // {abstract}
  std::string reprompt;            // {format}

  /// Throws kInvalidConfig naming the template and missing placeholder.
  void validate() const;
};

PromptBundle default_prompts();

/// Replaces every `{key}` found in `values`; unknown placeholders stay.
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values);

/// Script entries that make every stage of the default prompts parse under
/// the scripted backend.
Script default_script();

}  // namespace ideation
