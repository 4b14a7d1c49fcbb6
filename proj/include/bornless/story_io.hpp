#pragma once

// JSON form of stories and verdicts. Rationals travel as "num/den" strings.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bornless/stories.hpp"

namespace bornless {

/// Malformed input; the message names the line (syntax errors) or the field
/// path (schema errors), e.g. "stories[1].psi.amplitudes[0]: expected [re, im]".
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Accepts a single story object, an array of stories, or {"stories": [...]}.
std::vector<StoryGen> parse_stories(const std::string& text, const std::string& source = "<input>");
std::vector<StoryGen> load_stories(const std::string& path);

StoryGen story_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json story_to_json(const StoryGen& story);

nlohmann::json verdict_to_json(const Verdict& verdict);

}  // namespace bornless
