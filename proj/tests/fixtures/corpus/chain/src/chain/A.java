package chain;

public class A extends B {
    protected int depth() {
        return super.depth() + 1;
    }

    public static void main(String[] args) {
        A a = new A();
        System.out.println(a.depth());
    }
}
