#include "cartan/tables.hpp"

#include "cartan/polynomial.hpp"

namespace cartan {

const std::vector<TableEntry>& table_manifest() {
  static const std::vector<TableEntry> rows = {
      {3, 49, "x^3-x^2-x+1", "x^3-x^2-2x+1", 0.525454, 0.350303,
       "printed polynomial is (x-1)^2(x+1); corrected polynomial has discriminant 49"},
      {3, 81, "x^3-3x-1", "x^3-3x-1", 0.849287, 0.566191, ""},
      {4, 725, "x^4-x^3-3x^2+x+1", "x^4-x^3-3x^2+x+1", 0.825068, 0.330027, ""},
      {4, 1125, "x^4-x^3-4x^2+4x+1", "x^4-x^3-4x^2+4x+1", 1.165455, 0.466182, ""},
      {4, 1600, "x^4-6x^2+4", "x^4-6x^2+4", 1.542505, 0.617002, ""},
      {4, 1957, "x^4-4x^2-x+1", "x^4-4x^2-x+1", 1.918363, 0.767345, ""},
      {4, 2000, "x^4-5x^2+5", "x^4-5x^2+5", 1.852810, 0.741124, ""},
      {4, 2048, "x^4-4x^2+2", "x^4-4x^2+2", 2.441795, 0.976718, ""},
      {4, 2225, "x^4-x^3-5x^2+2x+4", "x^4-x^3-5x^2+2x+4", 2.064511, 0.825804, ""},
      {5, 14641, "x^5-x^4-4x^3+3x^2+3x-", "x^5-x^4-4x^3+3x^2+3x-1", 1.635694, 0.373873,
       "printed polynomial is truncated; completed polynomial has discriminant 14641"},
      {5, 24217, "x^5-5x^3-x^2+3x+1", "x^5-5x^3-x^2+3x+1", 2.399421, 0.548439, ""},
      {5, 36497, "x^5-x^4-3x^3+5x^2+x-1", "x^5-2x^4-3x^3+5x^2+x-1", 3.550657, 0.811579,
       "printed polynomial has discriminant -127808; corrected polynomial has discriminant 36497"},
      {5, 38569, "x^5-5x^3+4x-1", "x^5-5x^3+4x-1", 3.155437, 0.721243, ""},
      {6, 300125, "x^6-x^5-7x^4+2x^3+7x^2-2x-1", "x^6-x^5-7x^4+2x^3+7x^2-2x-1", 3.277562, 0.416198, ""},
      {6, 371293, "x^6-x^5-x^4+4x^3+6x^2-3x-1", "x^6-x^5-5x^4+4x^3+6x^2-3x-1", 3.774500, 0.479302,
       "printed polynomial has discriminant 176647805; corrected polynomial has discriminant 371293"},
      {6, 434581, "x^6-2x^5-4x^4+5x^3+4x^2-2x-1", "x^6-2x^5-4x^4+5x^3+4x^2-2x-1", 4.187943, 0.531802, ""},
      {6, 453789, "x^6-x^5-6x^4+6x^3+8x^2-8x+1", "x^6-x^5-6x^4+6x^3+8x^2-8x+1", 4.399962, 0.558725, ""},
      {6, 592661, "x^6-x^5-5x^4+4x^3+5x^2-2x-1", "x^6-x^5-5x^4+4x^3+5x^2-2x-1", 4.525483, 0.574665, ""},
      {6, 703493, "x^6-2x^5-5x^4+11x^3+2x^2-9x+1", "x^6-2x^5-5x^4+11x^3+2x^2-9x+1", 5.233524, 0.664574, ""},
  };
  return rows;
}

const TableEntry* find_table_entry(const std::string& polynomial) {
  const std::string key = IntPolynomial::parse(polynomial).to_string();
  for (const auto& row : table_manifest()) {
    if (IntPolynomial::parse(row.polynomial).to_string() == key) return &row;
  }
  return nullptr;
}

}  // namespace cartan
