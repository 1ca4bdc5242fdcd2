#ifndef BWTGLUE_ERRORS_HPP
#define BWTGLUE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bwtglue {

/// Corrupt or unparseable on-disk / on-wire payload (bad magic, bad
/// version, truncation, checksum mismatch, dangling rule id, ...).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// A shard replied with something other than what the protocol allows.
class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

/// A shard could not be reached or dropped out mid-conversation.  Carries
/// the identity of the failing shard so callers can report partial results.
class ShardError : public ProtocolError {
public:
    ShardError(std::string shard, const std::string& what)
        : ProtocolError("shard '" + shard + "': " + what), shard_(std::move(shard)) {}

    const std::string& shard() const { return shard_; }

private:
    std::string shard_;
};

}  // namespace bwtglue

#endif
