#ifndef MLTC_ERROR_HPP
#define MLTC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mltc {

// Base class for every error raised by the toolkit. The CLI maps these to
// exit codes; library users can catch the specific type they care about.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// -- file / parsing ---------------------------------------------------------

class EmptyFileError : public Error {
public:
    explicit EmptyFileError(const std::string& path)
        : Error("empty file: " + path) {}
};

class MalformedLineError : public Error {
public:
    MalformedLineError(const std::string& path, std::size_t line_no, const std::string& detail)
        : Error(path + ":" + std::to_string(line_no) + ": " + detail), line_no_(line_no) {}
    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

// -- shape / argument checks -------------------------------------------------

class DimensionMismatchError : public Error {
public:
    DimensionMismatchError(std::size_t expected, std::size_t got)
        : Error("dimension mismatch: expected " + std::to_string(expected) +
                ", got " + std::to_string(got)) {}
};

class LengthMismatchError : public Error {
public:
    LengthMismatchError(std::size_t a, std::size_t b)
        : Error("sequence lengths differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

// -- corpus / labels ---------------------------------------------------------

class EmptyCorpusError : public Error {
public:
    EmptyCorpusError() : Error("corpus contains no documents") {}
};

class InvalidThresholdError : public Error {
public:
    explicit InvalidThresholdError(const std::string& what) : Error(what) {}
};

class MissingVectorError : public Error {
public:
    explicit MissingVectorError(const std::string& doc_id)
        : Error("no feature vector for document: " + doc_id), doc_id_(doc_id) {}
    const std::string& doc_id() const { return doc_id_; }

private:
    std::string doc_id_;
};

class UnknownLabelError : public Error {
public:
    explicit UnknownLabelError(const std::string& label)
        : Error("label not in universe: " + label) {}
};

// -- training ----------------------------------------------------------------

class EmptyTargetsError : public Error {
public:
    EmptyTargetsError() : Error("target sequence is empty") {}
};

class NonFiniteLossError : public Error {
public:
    explicit NonFiniteLossError(const std::string& what) : Error(what) {}
};

class KTooLargeError : public Error {
public:
    KTooLargeError(std::size_t k, std::size_t n)
        : Error("k=" + std::to_string(k) + " requires at least " + std::to_string(k + 1) +
                " training instances, got " + std::to_string(n)) {}
};

class TooFewInstancesError : public Error {
public:
    explicit TooFewInstancesError(std::size_t n)
        : Error("need at least 2 instances to split, got " + std::to_string(n)) {}
};

// -- configuration -----------------------------------------------------------

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Warnings are diagnostics, not data: they go to stderr.
void log_warning(const std::string& message);

} // namespace mltc

#endif
