static int module_counter = 0;
extern int external_total;

static int bump(void)
{
    module_counter = module_counter + 1;
    return module_counter;
}
