#include <iostream>
int main() { std::cout << "psw\n"; return 0; }
