#pragma once

#include <string>
#include <vector>

namespace cartan {

/// One row of the reference tables of totally real fields.
struct TableEntry {
  int degree = 0;
  long long discriminant = 0;
  std::string printed;     // polynomial as printed in the source table
  std::string polynomial;  // polynomial actually used
  double regulator = 0.0;  // reference R_K
  double fried = 0.0;      // reference h*
  std::string note;        // why `polynomial` differs from `printed`, if it does
};

/// The 19 fields, ordered by (degree, discriminant).
const std::vector<TableEntry>& table_manifest();

/// Entry whose used polynomial equals `polynomial` (canonical text form), if any.
const TableEntry* find_table_entry(const std::string& polynomial);

}  // namespace cartan
