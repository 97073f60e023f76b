int acceptance_placeholder = 0;
int main(){return 1;}
