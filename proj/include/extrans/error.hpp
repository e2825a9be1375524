#pragma once

#include <stdexcept>
#include <string>

namespace extrans {

enum class ErrorCode {
    IoError,
    DuplicateDoc,
    StoreCorrupt,
    UnparseableQuery,
    BadLexicon,
};

inline const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::DuplicateDoc: return "duplicate_doc";
    case ErrorCode::StoreCorrupt: return "store_corrupt";
    case ErrorCode::UnparseableQuery: return "unparseable_query";
    case ErrorCode::BadLexicon: return "bad_lexicon";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) { }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace extrans
