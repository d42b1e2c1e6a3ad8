#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hypoforge/agent/action.hpp"
#include "hypoforge/query/access.hpp"

namespace hypoforge::agent {

enum class ParamKind { kEntityList, kEntity, kRelationList, kRelation, kPmidList, kText, kCount };

struct ToolParam {
  std::string name;
  ParamKind kind;
  bool required = false;
};

struct ToolSpec {
  std::string name;
  std::vector<ToolParam> params;
  std::string returns;
  std::string doc;
};

// The full catalog, in the order presented to the model.
const std::vector<ToolSpec>& tool_catalog();

// Dispatches parsed API calls onto a KnowledgeAccess. Execution never throws:
// unknown functions, bad arguments and retrieval errors come back as
// observations starting with "error:".
class ToolRegistry {
 public:
  // `enabled` empty means the whole catalog. Unknown names throw
  // Error(kConfig).
  explicit ToolRegistry(std::shared_ptr<const query::KnowledgeAccess> access,
                        std::vector<std::string> enabled = {});

  std::string execute(const ApiCall& call) const;

  // Python-style signatures and docstrings of the enabled tools.
  std::string api_description() const;

  const std::vector<const ToolSpec*>& tools() const { return tools_; }
  const query::KnowledgeAccess& access() const { return *access_; }

 private:
  std::shared_ptr<const query::KnowledgeAccess> access_;
  std::vector<const ToolSpec*> tools_;
};

}  // namespace hypoforge::agent
