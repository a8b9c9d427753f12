// filled in with the CLI implementation
