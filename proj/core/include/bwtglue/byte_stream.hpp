#ifndef BWTGLUE_BYTE_STREAM_HPP
#define BWTGLUE_BYTE_STREAM_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

namespace bwtglue {

/// Blocking, reliable, ordered byte stream — the transport under the wire
/// protocol.  Implementations: an in-memory loopback pair for hermetic tests
/// and a TCP socket for real deployments.
class ByteStream {
public:
    virtual ~ByteStream() = default;

    /// Blocks until exactly n bytes are read.  Returns false when the peer
    /// closed before any byte arrived; throws ProtocolError when the stream
    /// ends mid-read.
    virtual bool read_exact(void* buf, std::size_t n) = 0;

    /// Blocks until all n bytes are written; false when the peer is gone.
    virtual bool write_all(const void* buf, std::size_t n) = 0;

    virtual void close() = 0;
};

/// Two connected in-memory streams: bytes written to one end are read from
/// the other.  Both directions are unbounded, so writers never block.
std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_loopback_pair();

class TcpListener {
public:
    /// Binds and listens; port 0 picks an ephemeral port (see port()).
    TcpListener(const std::string& host, std::uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }
    std::unique_ptr<ByteStream> accept();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

std::unique_ptr<ByteStream> tcp_connect(const std::string& host, std::uint16_t port);

}  // namespace bwtglue

#endif
