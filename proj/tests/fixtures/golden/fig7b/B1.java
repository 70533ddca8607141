public interface B1 extends A1 {
    @Override
    public default String func() {
        return null;
    }
}
