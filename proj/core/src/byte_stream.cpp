#include "bwtglue/byte_stream.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <mutex>

#include "bwtglue/errors.hpp"

namespace bwtglue {

namespace {

struct PipeBuf {
    std::mutex m;
    std::condition_variable cv;
    std::string data;
    std::size_t head = 0;
    bool closed = false;

    std::size_t avail() const { return data.size() - head; }

    void take(void* buf, std::size_t n) {
        std::memcpy(buf, data.data() + head, n);
        head += n;
        if (head > 4096 && head * 2 > data.size()) {
            data.erase(0, head);
            head = 0;
        }
    }
};

class LoopbackStream final : public ByteStream {
public:
    LoopbackStream(std::shared_ptr<PipeBuf> rd, std::shared_ptr<PipeBuf> wr)
        : rd_(std::move(rd)), wr_(std::move(wr)) {}

    ~LoopbackStream() override { close(); }

    bool read_exact(void* buf, std::size_t n) override {
        if (n == 0) return true;
        std::unique_lock lk(rd_->m);
        rd_->cv.wait(lk, [&] { return rd_->avail() >= n || rd_->closed; });
        if (rd_->avail() >= n) {
            rd_->take(buf, n);
            return true;
        }
        if (rd_->avail() == 0) return false;
        throw ProtocolError("stream closed mid-read");
    }

    bool write_all(const void* buf, std::size_t n) override {
        std::lock_guard lk(wr_->m);
        if (wr_->closed) return false;
        wr_->data.append(static_cast<const char*>(buf), n);
        wr_->cv.notify_all();
        return true;
    }

    void close() override {
        for (auto& side : {rd_, wr_}) {
            std::lock_guard lk(side->m);
            side->closed = true;
            side->cv.notify_all();
        }
    }

private:
    std::shared_ptr<PipeBuf> rd_;
    std::shared_ptr<PipeBuf> wr_;
};

class TcpStream final : public ByteStream {
public:
    explicit TcpStream(int fd) : fd_(fd) {}
    ~TcpStream() override { close(); }

    bool read_exact(void* buf, std::size_t n) override {
        std::size_t got = 0;
        while (got < n) {
            ssize_t r = ::recv(fd_, static_cast<char*>(buf) + got, n - got, 0);
            if (r > 0) {
                got += static_cast<std::size_t>(r);
                continue;
            }
            if (r == 0) {
                if (got == 0) return false;
                throw ProtocolError("connection closed mid-read");
            }
            if (errno == EINTR) continue;
            throw ProtocolError(std::string("recv failed: ") + std::strerror(errno));
        }
        return true;
    }

    bool write_all(const void* buf, std::size_t n) override {
        std::size_t sent = 0;
        while (sent < n) {
            ssize_t r = ::send(fd_, static_cast<const char*>(buf) + sent, n - sent, MSG_NOSIGNAL);
            if (r >= 0) {
                sent += static_cast<std::size_t>(r);
                continue;
            }
            if (errno == EINTR) continue;
            if (errno == EPIPE || errno == ECONNRESET) return false;
            throw ProtocolError(std::string("send failed: ") + std::strerror(errno));
        }
        return true;
    }

    void close() override {
        if (fd_ >= 0) {
            ::shutdown(fd_, SHUT_RDWR);
            ::close(fd_);
            fd_ = -1;
        }
    }

private:
    int fd_;
};

int resolve_and_open(const std::string& host, std::uint16_t port, bool listening,
                     sockaddr_storage* bound_addr = nullptr) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (listening) hints.ai_flags = AI_PASSIVE;

    addrinfo* res = nullptr;
    const std::string port_str = std::to_string(port);
    int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), port_str.c_str(), &hints, &res);
    if (rc != 0) throw ProtocolError(std::string("cannot resolve ") + host + ": " + gai_strerror(rc));

    int fd = -1;
    std::string last_err = "no addresses";
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_err = std::strerror(errno);
            continue;
        }
        if (listening) {
            int one = 1;
            ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
            if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
                if (bound_addr) std::memcpy(bound_addr, ai->ai_addr, ai->ai_addrlen);
                break;
            }
        } else if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            break;
        }
        last_err = std::strerror(errno);
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0)
        throw ProtocolError((listening ? "cannot listen on " : "cannot connect to ") + host + ":" +
                            port_str + ": " + last_err);
    return fd;
}

}  // namespace

std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_loopback_pair() {
    auto a2b = std::make_shared<PipeBuf>();
    auto b2a = std::make_shared<PipeBuf>();
    return {std::make_unique<LoopbackStream>(b2a, a2b),
            std::make_unique<LoopbackStream>(a2b, b2a)};
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
    fd_ = resolve_and_open(host, port, /*listening=*/true);
    sockaddr_storage addr{};
    socklen_t len = sizeof(addr);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
        ::close(fd_);
        throw ProtocolError(std::string("getsockname failed: ") + std::strerror(errno));
    }
    if (addr.ss_family == AF_INET)
        port_ = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
    else if (addr.ss_family == AF_INET6)
        port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<ByteStream> TcpListener::accept() {
    for (;;) {
        int fd = ::accept(fd_, nullptr, nullptr);
        if (fd >= 0) return std::make_unique<TcpStream>(fd);
        if (errno == EINTR) continue;
        throw ProtocolError(std::string("accept failed: ") + std::strerror(errno));
    }
}

std::unique_ptr<ByteStream> tcp_connect(const std::string& host, std::uint16_t port) {
    return std::make_unique<TcpStream>(resolve_and_open(host, port, /*listening=*/false));
}

}  // namespace bwtglue
