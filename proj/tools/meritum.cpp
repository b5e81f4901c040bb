#include <iostream>
int main(){std::cout << "meritum (under construction)\n"; return 0;}
