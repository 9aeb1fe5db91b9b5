// Placeholder translation unit; the module lands in a later commit.
namespace vortex {}
