#include "ideation/prompts.hpp"

#include <utility>
#include <vector>

#include "ideation/error.hpp"

namespace ideation {

void PromptBundle::validate() const {
  const std::vector<std::pair<const char*, std::pair<const std::string*, std::vector<const char*>>>> checks = {
      {"persona", {&persona, {"{agent}", "{profile}"}}},
      {"topic_prompt", {&topic_prompt, {"{history}"}}},
      {"topic_score_prompt", {&topic_score_prompt, {"{proposals}", "{format}"}}},
      {"generation_prompt", {&generation_prompt, {"{topic}", "{previous_idea}"}}},
      {"revision_prompt", {&revision_prompt, {"{idea}"}}},
      {"synthesis_prompt", {&synthesis_prompt, {"{idea}", "{revisions}"}}},
      {"reflection_prompt", {&reflection_prompt, {"{idea}", "{synthesis}"}}},
      {"review_prompt", {&review_prompt, {"{ideas}", "{references}", "{format}"}}},
      {"judge_prompt", {&judge_prompt, {"{ideas}", "{references}", "{format}"}}},
      {"abstract_prompt", {&abstract_prompt, {"{idea}"}}},
      {"refine_prompt", {&refine_prompt, {"{abstract}"}}},
      {"reprompt", {&reprompt, {"{format}"}}},
  };
  for (const auto& [name, check] : checks) {
    for (const char* placeholder : check.second) {
      if (check.first->find(placeholder) == std::string::npos) {
        throw Error(ErrorCode::kInvalidConfig, std::string(name) + " lacks placeholder " + placeholder);
      }
    }
  }
}

std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    const std::size_t close = tmpl.find('}', open);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(open));
      break;
    }
    const std::string key(tmpl.substr(open + 1, close - open - 1));
    if (auto it = values.find(key); it != values.end()) {
      out += it->second;
    } else {
      out.append(tmpl.substr(open, close - open + 1));
    }
    pos = close + 1;
  }
  return out;
}

PromptBundle default_prompts() {
  PromptBundle p;
  p.persona =
      "You are {agent}, a scientist collaborating with a small research team.\n"
      "Your background:\n{profile}";
  p.topic_prompt =
      "Propose one research topic the team could pursue, drawing on your background and the "
      "discussion so far. Reply with the topic in one or two sentences.\n"
      "[[HISTORY]]\n{history}\n[[/HISTORY]]";
  p.topic_score_prompt =
      "Score every proposed topic from 1 (weak) to 10 (excellent) for novelty and feasibility.\n"
      "[[PROPOSALS]]\n{proposals}\n[[/PROPOSALS]]\n"
      "Reply with one line per proposal, exactly in this format:\n"
      "[[FORMAT]]\n{format}\n[[/FORMAT]]";
  p.generation_prompt =
      "The team topic is:\n[[TOPIC]]\n{topic}\n[[/TOPIC]]\n"
      "Your idea from the previous round (empty in the first round):\n"
      "[[PREVIOUS]]\n{previous_idea}\n[[/PREVIOUS]]\n"
      "Propose one concrete, novel research idea for this topic. State the problem, the "
      "approach, and the expected contribution. Use the reference papers below to ground "
      "the idea and to avoid duplicating prior work.";
  p.revision_prompt =
      "A fellow scientist proposed the idea below. Revise it using your own expertise: "
      "strengthen the method, add missing perspectives, and fix weaknesses. Reply with the "
      "full revised idea.\n[[IDEA]]\n{idea}\n[[/IDEA]]";
  p.synthesis_prompt =
      "As team leader, consolidate the revisions your scientists made to the idea below into "
      "one coherent piece of feedback, adding your own knowledge where useful.\n"
      "[[IDEA]]\n{idea}\n[[/IDEA]]\n[[REVISIONS]]\n{revisions}\n[[/REVISIONS]]";
  p.reflection_prompt =
      "Your team leader summarized the team's feedback on your idea. Reflect on it and "
      "produce the final version of your idea.\n"
      "[[IDEA]]\n{idea}\n[[/IDEA]]\n[[SYNTHESIS]]\n{synthesis}\n[[/SYNTHESIS]]";
  p.review_prompt =
      "Review the candidate ideas for novelty, feasibility, and potential impact, using the "
      "reference papers assigned to you. Rank every idea (best first, no ties) and give a "
      "confidence from 1 to 10 for each.\n"
      "[[IDEAS]]\n{ideas}\n[[/IDEAS]]\n[[REFERENCES]]\n{references}\n[[/REFERENCES]]\n"
      "Reply exactly in this format:\n[[FORMAT]]\n{format}\n[[/FORMAT]]";
  p.judge_prompt =
      "As team leader, choose the single most novel and feasible idea.\n"
      "[[IDEAS]]\n{ideas}\n[[/IDEAS]]\n[[REFERENCES]]\n{references}\n[[/REFERENCES]]\n"
      "Reply exactly in this format:\n[[FORMAT]]\n{format}\n[[/FORMAT]]";
  p.abstract_prompt =
      "Write a scientific abstract (title and abstract) for the idea below.\n"
      "[[IDEA]]\n{idea}\n[[/IDEA]]";
  p.refine_prompt =
      "Refine the team's draft abstract below. Keep its idea; improve clarity, rigor, and "
      "completeness. Reply with the full abstract.\n[[ABSTRACT]]\n{abstract}\n[[/ABSTRACT]]";
  p.reprompt =
      "Your previous reply could not be parsed. Reply again using exactly this format:\n"
      "[[FORMAT]]\n{format}\n[[/FORMAT]]";
  return p;
}

Script default_script() {
  Script s;
  s.set("TOPIC:", "Topic from {arg}: adaptive methods for {hash}");
  s.set("TOPIC_SCORE:", "{section:FORMAT}");
  s.set("IDEA:", "Idea by {arg} [{hash}] on: {section:TOPIC}");
  s.set("REVISE:", "{section:IDEA}\n(revised by {arg})");
  s.set("SYNTH:", "Feedback from {arg}:\n{section:REVISIONS}");
  s.set("REFLECT:", "Idea by {arg} [{hash}] after reflection.");
  s.set("RANK:", "{section:FORMAT}");
  s.set("JUDGE:", "{section:FORMAT}");
  s.set("DRAFT:", "Abstract by {arg}: {section:IDEA}");
  s.set("REFINE:", "{section:ABSTRACT}\n(refined by {arg})");
  return s;
}

}  // namespace ideation
