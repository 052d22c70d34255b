#ifndef PIFREE_IO_HPP
#define PIFREE_IO_HPP

#include <iosfwd>
#include <string>

#include "pifree/oracle.hpp"

namespace pifree {

/// One numeric value per line; `*` marks an erased entry. When csv_column
/// is non-negative, each line is split on commas and that column is read
/// instead. NaN and non-finite values are rejected.
Sequence read_sequence(std::istream& in, int csv_column = -1);
Sequence read_sequence_file(const std::string& path, int csv_column = -1);

void write_sequence(std::ostream& out, const Sequence& f);

}  // namespace pifree

#endif
