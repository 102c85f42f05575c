#pragma once

#include <map>
#include <string>
#include <vector>

namespace ietlab {

// Traceability between the quantitative claims this library tests and the
// code that implements them. Source headers tag themselves with
// "// claims: <id>, <id>" lines; the registry below is the authority on
// which claims must be covered. A registered claim with no annotation
// anywhere fails the documentation build (UnmappedClaim).
struct ClaimEntry {
  std::string id;         // kebab-case slug
  std::string statement;  // one-line description of the tested content
  std::vector<std::string> operations;  // implementing entry points
  std::vector<int> criteria;            // acceptance test numbers
};

const std::vector<ClaimEntry>& claim_registry();

// Material intentionally outside the test surface, listed for readers.
const std::vector<std::string>& out_of_scope_notes();

// Scans *.hpp/*.cpp under root for "// claims:" annotations.
// Returns claim id -> annotated files.
std::map<std::string, std::vector<std::string>> scan_claim_annotations(
    const std::string& root);

// Renders the cross-reference table; throws UnmappedClaim if a registered
// claim has no annotation.
std::string generate_claim_map(
    const std::vector<ClaimEntry>& registry,
    const std::map<std::string, std::vector<std::string>>& annotations,
    const std::vector<std::string>& out_of_scope);

}  // namespace ietlab
