#pragma once

#include "reviewaudit/llm/backend.hpp"

namespace reviewaudit::llm {

// Deterministic local model. It understands the toolkit's prompt templates
// (dispatching on their "Task:" line) and synthesizes plausible responses
// from the prompt text alone: weakness-cue sentences become critique,
// instruction blocks near the end of a submission get obeyed, and ratings
// follow a transparent keyword score. Same prompt, same answer, always.
class MockBackend : public Backend {
public:
  ChatResponse complete(const ChatRequest& req) override;
};

}  // namespace reviewaudit::llm
