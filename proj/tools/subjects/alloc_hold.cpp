// Calibration subject: touches MIB mebibytes and holds them resident.
// usage: smellwatt-alloc-hold MIB SECONDS
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <memory>
#include <thread>

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: " << argv[0] << " MIB SECONDS\n";
        return 2;
    }
    const std::size_t bytes = static_cast<std::size_t>(std::atol(argv[1])) << 20;
    auto block = std::make_unique<unsigned char[]>(bytes);
    std::memset(block.get(), 0xA5, bytes);
    std::this_thread::sleep_for(std::chrono::duration<double>(std::atof(argv[2])));
    volatile unsigned char last = block[bytes - 1];
    return last == 0xA5 ? 0 : 1;
}
